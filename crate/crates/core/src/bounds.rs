//! Lower bounds for `tau(A)` and the Hadamard-product spectral-radius
//! upper bound they are derived from.
//!
//! Every bound is returned as a [`BoundResult`]; a bound whose hypotheses
//! fail (matrix not dominant enough, ladder column disabled, ...) comes back
//! with `applicable = false` and a reason instead of an error.
//!
//! The iterated bounds all share one shape. With per-index diagonal
//! estimates `x_i` (the inverse diagonal `alpha_ii`, or the entry-only
//! `phi_i^(t)`), off-diagonal weights `w_i` and a spread term `s_ij`:
//!
//! ```text
//! pair form:   2 / max_{i != j} { x_i + x_j + sqrt(s_ij^2 + 4 x_i x_j w_i w_j) }
//! single form: 1 / max_i { (1 + w_i) x_i }
//! ```

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{
    classify, default_eps, invert, jacobi_matrix, spectral_radius_nonneg, DenseMatrix, MatrixClass,
    DEFAULT_MAX_ITER,
};
use crate::sequences::{base_quantities, build_ladder, AuxLadder, BaseQuantities};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ShivakumarLower,
    ShivakumarUpperRowsum,
    ShivakumarUpperDiag,
    ShivakumarInvLower,
    ShivakumarInvUpper,
    Th31Tianhuang,
    Cor34Tianhuang,
    LiInverse,
    LiEntries,
    WangSun,
    UpsilonT,
    UpsilonTildeT,
    GammaT,
    OmegaT,
    GammaTildeT,
    OmegaTildeT,
}

impl Method {
    pub const ALL: [Method; 16] = [
        Method::ShivakumarLower,
        Method::ShivakumarUpperRowsum,
        Method::ShivakumarUpperDiag,
        Method::ShivakumarInvLower,
        Method::ShivakumarInvUpper,
        Method::Th31Tianhuang,
        Method::Cor34Tianhuang,
        Method::LiInverse,
        Method::LiEntries,
        Method::WangSun,
        Method::UpsilonT,
        Method::UpsilonTildeT,
        Method::GammaT,
        Method::OmegaT,
        Method::GammaTildeT,
        Method::OmegaTildeT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ShivakumarLower => "shivakumar_lower",
            Method::ShivakumarUpperRowsum => "shivakumar_upper_rowsum",
            Method::ShivakumarUpperDiag => "shivakumar_upper_diag",
            Method::ShivakumarInvLower => "shivakumar_inv_lower",
            Method::ShivakumarInvUpper => "shivakumar_inv_upper",
            Method::Th31Tianhuang => "th31_tianhuang",
            Method::Cor34Tianhuang => "cor34_tianhuang",
            Method::LiInverse => "li_inverse",
            Method::LiEntries => "li_entries",
            Method::WangSun => "wang_sun",
            Method::UpsilonT => "upsilon_t",
            Method::UpsilonTildeT => "upsilon_tilde_t",
            Method::GammaT => "gamma_t",
            Method::OmegaT => "omega_t",
            Method::GammaTildeT => "gamma_tilde_t",
            Method::OmegaTildeT => "omega_tilde_t",
        }
    }

    pub fn kind(self) -> BoundKind {
        match self {
            Method::ShivakumarUpperRowsum
            | Method::ShivakumarUpperDiag
            | Method::ShivakumarInvUpper => BoundKind::Upper,
            _ => BoundKind::Lower,
        }
    }

    /// Methods evaluated once per iteration index `t`.
    pub fn is_sequence(self) -> bool {
        matches!(
            self,
            Method::UpsilonT
                | Method::UpsilonTildeT
                | Method::GammaT
                | Method::OmegaT
                | Method::GammaTildeT
                | Method::OmegaTildeT
        )
    }

    /// Methods that only use entries of `A` and need strict dominance.
    pub fn needs_sdd(self) -> bool {
        matches!(
            self,
            Method::Cor34Tianhuang
                | Method::LiEntries
                | Method::UpsilonTildeT
                | Method::GammaTildeT
                | Method::OmegaTildeT
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::input(format!("unknown bound method '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
        })
    }
}

/// One named bound value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub method: Method,
    pub kind: BoundKind,
    pub t: Option<usize>,
    pub value: Option<f64>,
    pub applicable: bool,
    pub reason: Option<String>,
}

impl BoundResult {
    fn ok(method: Method, t: Option<usize>, value: f64) -> Self {
        Self {
            method,
            kind: method.kind(),
            t,
            value: Some(value),
            applicable: true,
            reason: None,
        }
    }

    fn not_applicable(method: Method, t: Option<usize>, reason: impl Into<String>) -> Self {
        Self {
            method,
            kind: method.kind(),
            t,
            value: None,
            applicable: false,
            reason: Some(reason.into()),
        }
    }

    fn from_outcome(
        method: Method,
        t: Option<usize>,
        outcome: std::result::Result<f64, String>,
    ) -> Self {
        match outcome {
            Ok(v) => Self::ok(method, t, v),
            Err(reason) => Self::not_applicable(method, t, reason),
        }
    }
}

/// The table of every bound for one matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub matrix_id: String,
    pub tau: Option<f64>,
    pub t_max: usize,
    pub rows: Vec<BoundResult>,
}

impl BoundReport {
    pub fn find(&self, method: Method, t: Option<usize>) -> Option<&BoundResult> {
        self.rows.iter().find(|r| r.method == method && r.t == t)
    }

    /// Value of an applicable row.
    pub fn value(&self, method: Method, t: Option<usize>) -> Option<f64> {
        self.find(method, t).and_then(|r| r.value)
    }

    /// Applicable values of a sequence method for `t = 1..=t_max`.
    pub fn sequence(&self, method: Method) -> Vec<Option<f64>> {
        (1..=self.t_max)
            .map(|t| self.value(method, Some(t)))
            .collect()
    }

    /// Largest applicable lower bound.
    pub fn best_lower(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.kind == BoundKind::Lower)
            .filter_map(|r| r.value)
            .reduce(f64::max)
    }
}

/// Shared inputs of the bounds that predate the iterated sequences.
#[derive(Debug, Clone, Copy)]
pub struct BoundContext<'a> {
    pub a: &'a DenseMatrix,
    pub a_inv: &'a DenseMatrix,
    pub class: &'a MatrixClass,
    pub base: &'a BaseQuantities,
    pub ladder: &'a AuxLadder,
    /// `rho(J_A)`
    pub rho_jacobi: f64,
}

const NOT_WCDD: &str = "matrix is not weakly chained diagonally dominant";
const NOT_SDD: &str = "requires strict diagonal dominance";
const NOT_M: &str = "matrix is not a nonsingular M-matrix";

/// Two-sided row-sum bounds, the Jacobi-radius bounds, the `u_i` bound and
/// the entry-only `phi_i` bounds (single-valued rows).
pub fn single_bounds(ctx: &BoundContext<'_>) -> Vec<BoundResult> {
    let mut out = shivakumar(ctx);
    out.push(th31_tianhuang(ctx));
    out.push(wang_sun(ctx));
    out.push(li_inverse(ctx));
    out.push(cor34_tianhuang(ctx));
    out.push(li_entries(ctx));
    out
}

/// Every prior bound at iteration `t`: the single-valued rows followed by
/// `upsilon_t` and `upsilon_tilde_t`.
pub fn legacy_bounds(ctx: &BoundContext<'_>, t: usize) -> Result<Vec<BoundResult>> {
    check_depth(ctx.ladder, t)?;
    let mut out = single_bounds(ctx);
    out.push(upsilon(ctx, t)?);
    out.push(upsilon_tilde(ctx, t)?);
    Ok(out)
}

fn shivakumar(ctx: &BoundContext<'_>) -> Vec<BoundResult> {
    let methods = [
        Method::ShivakumarLower,
        Method::ShivakumarUpperRowsum,
        Method::ShivakumarUpperDiag,
        Method::ShivakumarInvLower,
        Method::ShivakumarInvUpper,
    ];
    if !ctx.class.is_wcdd {
        return methods
            .into_iter()
            .map(|m| BoundResult::not_applicable(m, None, NOT_WCDD))
            .collect();
    }
    let rows = ctx.a.row_sums();
    let inv_rows = ctx.a_inv.row_sums();
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    vec![
        BoundResult::ok(Method::ShivakumarLower, None, min(&rows)),
        BoundResult::ok(Method::ShivakumarUpperRowsum, None, max(&rows)),
        BoundResult::ok(Method::ShivakumarUpperDiag, None, min(&ctx.a.diagonal())),
        BoundResult::ok(Method::ShivakumarInvLower, None, 1.0 / max(&inv_rows)),
        BoundResult::ok(Method::ShivakumarInvUpper, None, 1.0 / min(&inv_rows)),
    ]
}

fn th31_tianhuang(ctx: &BoundContext<'_>) -> BoundResult {
    let n = ctx.a.n() as f64;
    let alpha_max = max_of(&ctx.a_inv.diagonal());
    BoundResult::ok(
        Method::Th31Tianhuang,
        None,
        1.0 / ((1.0 + (n - 1.0) * ctx.rho_jacobi) * alpha_max),
    )
}

fn li_inverse(ctx: &BoundContext<'_>) -> BoundResult {
    let alpha = ctx.a_inv.diagonal();
    let nm1 = ctx.a.n() as f64 - 1.0;
    let w = vec![nm1 * ctx.rho_jacobi; alpha.len()];
    BoundResult::ok(
        Method::LiInverse,
        None,
        pair_form(&alpha, &w, |i, j| alpha[i] - alpha[j]),
    )
}

fn wang_sun(ctx: &BoundContext<'_>) -> BoundResult {
    let outcome = row_maxima(ctx.ladder, |i| ctx.ladder.u_max(i)).map(|u| {
        let alpha = ctx.a_inv.diagonal();
        let nm1 = ctx.a.n() as f64 - 1.0;
        let w: Vec<f64> = u.iter().map(|x| nm1 * x).collect();
        pair_form(&alpha, &w, |i, j| alpha[i] - alpha[j])
    });
    BoundResult::from_outcome(Method::WangSun, None, outcome)
}

fn cor34_tianhuang(ctx: &BoundContext<'_>) -> BoundResult {
    let outcome = sdd_phi(ctx).map(|phi| {
        let nm1 = ctx.a.n() as f64 - 1.0;
        1.0 / ((1.0 + nm1 * ctx.base.d_max) * max_of(&phi))
    });
    BoundResult::from_outcome(Method::Cor34Tianhuang, None, outcome)
}

fn li_entries(ctx: &BoundContext<'_>) -> BoundResult {
    let outcome = sdd_phi(ctx).map(|phi| {
        let nm1 = ctx.a.n() as f64 - 1.0;
        let w = vec![nm1 * ctx.base.d_max; phi.len()];
        let inv_diag = reciprocal_diagonal(ctx.a);
        pair_form(&phi, &w, |i, j| {
            phi[i].max(phi[j]) - inv_diag[i].min(inv_diag[j])
        })
    });
    BoundResult::from_outcome(Method::LiEntries, None, outcome)
}

fn sdd_phi(ctx: &BoundContext<'_>) -> std::result::Result<Vec<f64>, String> {
    if !ctx.class.is_sdd {
        return Err(NOT_SDD.into());
    }
    ctx.base
        .phi
        .iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| format!("phi denominator not positive at row {}", i + 1)))
        .collect()
}

/// Pair bound with the inverse diagonal and `(n-1) p_i^(t)` weights.
pub fn upsilon(ctx: &BoundContext<'_>, t: usize) -> Result<BoundResult> {
    check_depth(ctx.ladder, t)?;
    let outcome = row_maxima(ctx.ladder, |i| ctx.ladder.p_max(t, i)).map(|p| {
        let alpha = ctx.a_inv.diagonal();
        let nm1 = ctx.a.n() as f64 - 1.0;
        let w: Vec<f64> = p.iter().map(|x| nm1 * x).collect();
        pair_form(&alpha, &w, |i, j| alpha[i] - alpha[j])
    });
    Ok(BoundResult::from_outcome(
        Method::UpsilonT,
        Some(t),
        outcome,
    ))
}

/// Entry-only pair bound with `phi_i^(t)` and `(n-1) p_i^(t)` weights.
pub fn upsilon_tilde(ctx: &BoundContext<'_>, t: usize) -> Result<BoundResult> {
    check_depth(ctx.ladder, t)?;
    let outcome = if !ctx.class.is_sdd {
        Err(NOT_SDD.to_string())
    } else {
        row_maxima(ctx.ladder, |i| ctx.ladder.p_max(t, i)).and_then(|p| {
            let phi = phi_at(ctx.ladder, t)?;
            let nm1 = ctx.a.n() as f64 - 1.0;
            let w: Vec<f64> = p.iter().map(|x| nm1 * x).collect();
            let inv_diag = reciprocal_diagonal(ctx.a);
            Ok(pair_form(&phi, &w, |i, j| {
                phi[i].max(phi[j]) - inv_diag[i].min(inv_diag[j])
            }))
        })
    };
    Ok(BoundResult::from_outcome(
        Method::UpsilonTildeT,
        Some(t),
        outcome,
    ))
}

/// `Gamma_t`: pair bound with the inverse diagonal and the column sums
/// `sum_{k != i} p_ki^(t)`.
pub fn gamma(a_inv: &DenseMatrix, ladder: &AuxLadder, t: usize) -> Result<BoundResult> {
    check_depth(ladder, t)?;
    check_order(a_inv, ladder)?;
    let outcome = column_sums(ladder, t).map(|w| {
        let alpha = a_inv.diagonal();
        pair_form(&alpha, &w, |i, j| alpha[i] - alpha[j])
    });
    Ok(BoundResult::from_outcome(Method::GammaT, Some(t), outcome))
}

/// `Omega_t = 1 / max_i (1 + sum_{k != i} p_ki^(t)) alpha_ii`.
pub fn omega(a_inv: &DenseMatrix, ladder: &AuxLadder, t: usize) -> Result<BoundResult> {
    check_depth(ladder, t)?;
    check_order(a_inv, ladder)?;
    let outcome = column_sums(ladder, t).map(|w| single_form(&a_inv.diagonal(), &w));
    Ok(BoundResult::from_outcome(Method::OmegaT, Some(t), outcome))
}

/// Entry-only `Gamma~_t` for strictly diagonally dominant `A`.
///
/// The spread term uses the lower estimate
/// `alpha_ii >= 1 / (a_ii - sum_{k != i} a_ik a_ki / a_kk)`, written purely in
/// entries of `A`. A variant of this inequality with inverse entries in
/// place of `a_ki` also circulates; the entries-only form is used here so
/// the bound does not depend on `A^{-1}`.
pub fn gamma_tilde(a: &DenseMatrix, ladder: &AuxLadder, t: usize) -> Result<BoundResult> {
    check_depth(ladder, t)?;
    check_order(a, ladder)?;
    let outcome = tilde_inputs(a, ladder, t).map(|(phi, w)| {
        let lower = inverse_diagonal_lower(a);
        pair_form(&phi, &w, |i, j| phi[i].max(phi[j]) - lower[i].min(lower[j]))
    });
    Ok(BoundResult::from_outcome(
        Method::GammaTildeT,
        Some(t),
        outcome,
    ))
}

/// Entry-only `Omega~_t = 1 / max_i (1 + sum_{k != i} p_ki^(t)) phi_i^(t)`.
pub fn omega_tilde(a: &DenseMatrix, ladder: &AuxLadder, t: usize) -> Result<BoundResult> {
    check_depth(ladder, t)?;
    check_order(a, ladder)?;
    let outcome = tilde_inputs(a, ladder, t).map(|(phi, w)| single_form(&phi, &w));
    Ok(BoundResult::from_outcome(
        Method::OmegaTildeT,
        Some(t),
        outcome,
    ))
}

/// Upper bounds on `rho(B o A^{-1})` for `B >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HadamardUpper {
    /// Pair (Brauer-type) bound.
    pub tight: f64,
    /// Single-index bound, never below `tight`.
    pub loose: f64,
}

/// `None` when the ladder has a disabled column.
pub fn hadamard_upper(
    a: &DenseMatrix,
    a_inv: &DenseMatrix,
    b: &DenseMatrix,
    ladder: &AuxLadder,
    t: usize,
) -> Result<Option<HadamardUpper>> {
    check_depth(ladder, t)?;
    a.check_same_order(a_inv)?;
    a.check_same_order(b)?;
    check_order(a, ladder)?;
    if let Some(pos) = b.as_slice().iter().position(|&x| x < 0.0) {
        let n = b.n();
        return Err(Error::input(format!(
            "weight matrix has a negative entry at ({}, {})",
            pos / n + 1,
            pos % n + 1
        )));
    }
    if !ladder.is_fully_applicable() {
        return Ok(None);
    }
    let n = a.n();
    let diag: Vec<f64> = (0..n).map(|i| b[(i, i)] * a_inv[(i, i)]).collect();
    let alpha = a_inv.diagonal();
    let weighted: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&k| k != i)
                .map(|k| b[(k, i)] * ladder.p(t, k, i).expect("applicable ladder"))
                .sum()
        })
        .collect();
    let tight = 0.5
        * pair_max(n, |i, j| {
            let spread = diag[i] - diag[j];
            diag[i]
                + diag[j]
                + clamped_sqrt(
                    spread * spread + 4.0 * alpha[i] * alpha[j] * weighted[i] * weighted[j],
                )
        });
    let loose = (0..n)
        .map(|i| (b[(i, i)] + weighted[i]) * alpha[i])
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Some(HadamardUpper { tight, loose }))
}

/// Runs classification, inversion, the ladder, the oracle and every bound
/// for `t = 1..=t_max`.
///
/// Row order: two-sided row-sum family, Jacobi-radius bound, `u_i` bound,
/// Jacobi-radius pair bound, `upsilon_t`, `gamma_t`, `omega_t` (all `t`),
/// then the entry-only family: `phi_i` single and pair bounds,
/// `upsilon_tilde_t`, `gamma_tilde_t`, `omega_tilde_t`. Rows that do not
/// apply are kept and flagged.
pub fn full_report(a: &DenseMatrix, t_max: usize, tol: f64) -> Result<BoundReport> {
    if t_max < 1 {
        return Err(Error::input("t_max must be at least 1"));
    }
    if a.n() < 2 {
        return Err(Error::input("bound report needs order n >= 2"));
    }
    let class = classify(a, default_eps(a))?;
    if !class.is_m_matrix {
        return Ok(not_m_report(t_max));
    }
    let inv = invert(a)?.inverse;
    let base = base_quantities(a)?;
    let ladder = build_ladder(a, t_max)?;
    let rho_jacobi = spectral_radius_nonneg(&jacobi_matrix(a)?, tol, DEFAULT_MAX_ITER)?.radius;
    let tau = 1.0 / spectral_radius_nonneg(&inv, tol, DEFAULT_MAX_ITER)?.radius;
    let ctx = BoundContext {
        a,
        a_inv: &inv,
        class: &class,
        base: &base,
        ladder: &ladder,
        rho_jacobi,
    };

    let ts = 1..=t_max;
    let mut rows = shivakumar(&ctx);
    rows.push(th31_tianhuang(&ctx));
    rows.push(wang_sun(&ctx));
    rows.push(li_inverse(&ctx));
    for t in ts.clone() {
        rows.push(upsilon(&ctx, t)?);
    }
    for t in ts.clone() {
        rows.push(gamma(&inv, &ladder, t)?);
    }
    for t in ts.clone() {
        rows.push(omega(&inv, &ladder, t)?);
    }
    rows.push(cor34_tianhuang(&ctx));
    rows.push(li_entries(&ctx));
    for t in ts.clone() {
        rows.push(upsilon_tilde(&ctx, t)?);
    }
    for t in ts.clone() {
        rows.push(gamma_tilde(a, &ladder, t)?);
    }
    for t in ts {
        rows.push(omega_tilde(a, &ladder, t)?);
    }

    Ok(BoundReport {
        matrix_id: String::new(),
        tau: Some(tau),
        t_max,
        rows,
    })
}

/// Row layout of [`full_report`] as `(method, t)` pairs.
pub fn report_layout(t_max: usize) -> Vec<(Method, Option<usize>)> {
    use Method::*;
    let mut out: Vec<(Method, Option<usize>)> = [
        ShivakumarLower,
        ShivakumarUpperRowsum,
        ShivakumarUpperDiag,
        ShivakumarInvLower,
        ShivakumarInvUpper,
        Th31Tianhuang,
        WangSun,
        LiInverse,
    ]
    .into_iter()
    .map(|m| (m, None))
    .collect();
    for m in [UpsilonT, GammaT, OmegaT] {
        out.extend((1..=t_max).map(|t| (m, Some(t))));
    }
    out.push((Cor34Tianhuang, None));
    out.push((LiEntries, None));
    for m in [UpsilonTildeT, GammaTildeT, OmegaTildeT] {
        out.extend((1..=t_max).map(|t| (m, Some(t))));
    }
    out
}

fn not_m_report(t_max: usize) -> BoundReport {
    BoundReport {
        matrix_id: String::new(),
        tau: None,
        t_max,
        rows: report_layout(t_max)
            .into_iter()
            .map(|(m, t)| BoundResult::not_applicable(m, t, NOT_M))
            .collect(),
    }
}

fn tilde_inputs(
    a: &DenseMatrix,
    ladder: &AuxLadder,
    t: usize,
) -> std::result::Result<(Vec<f64>, Vec<f64>), String> {
    if !crate::matcore::dominance_ratios(a).iter().all(|&d| d < 1.0) {
        return Err(NOT_SDD.into());
    }
    let w = column_sums(ladder, t)?;
    let phi = phi_at(ladder, t)?;
    Ok((phi, w))
}

fn column_sums(ladder: &AuxLadder, t: usize) -> std::result::Result<Vec<f64>, String> {
    (0..ladder.n())
        .map(|i| {
            ladder
                .p_colsum(t, i)
                .ok_or_else(|| ladder_reason(ladder, i))
        })
        .collect()
}

fn phi_at(ladder: &AuxLadder, t: usize) -> std::result::Result<Vec<f64>, String> {
    (0..ladder.n())
        .map(|i| {
            ladder.phi_t(t, i).ok_or_else(|| match ladder.status(i) {
                Some(_) => ladder_reason(ladder, i),
                None => format!("phi^({t}) denominator not positive at row {}", i + 1),
            })
        })
        .collect()
}

fn row_maxima(
    ladder: &AuxLadder,
    get: impl Fn(usize) -> Option<f64>,
) -> std::result::Result<Vec<f64>, String> {
    (0..ladder.n())
        .map(|i| {
            get(i).ok_or_else(|| {
                let (col, _) = ladder
                    .first_inapplicable()
                    .unwrap_or((i, crate::sequences::Stage::R));
                ladder_reason(ladder, col)
            })
        })
        .collect()
}

fn ladder_reason(ladder: &AuxLadder, i: usize) -> String {
    match ladder.status(i) {
        Some(stage) => format!(
            "iteration ladder not applicable at reference index {} (stage {stage})",
            i + 1
        ),
        None => format!(
            "iteration ladder value missing at reference index {}",
            i + 1
        ),
    }
}

fn check_depth(ladder: &AuxLadder, t: usize) -> Result<()> {
    if t == 0 || t > ladder.t_max() {
        return Err(Error::input(format!(
            "iteration index {t} outside 1..={}",
            ladder.t_max()
        )));
    }
    Ok(())
}

fn check_order(m: &DenseMatrix, ladder: &AuxLadder) -> Result<()> {
    if m.n() != ladder.n() {
        return Err(Error::input(format!(
            "order mismatch: matrix {} vs ladder {}",
            m.n(),
            ladder.n()
        )));
    }
    Ok(())
}

/// `1 / (a_ii - sum_{k != i} a_ik a_ki / a_kk)`, a lower estimate of `alpha_ii`.
pub fn inverse_diagonal_lower(a: &DenseMatrix) -> Vec<f64> {
    let n = a.n();
    (0..n)
        .map(|i| {
            let s: f64 = (0..n)
                .filter(|&k| k != i)
                .map(|k| a[(i, k)] * a[(k, i)] / a[(k, k)])
                .sum();
            1.0 / (a[(i, i)] - s)
        })
        .collect()
}

fn reciprocal_diagonal(a: &DenseMatrix) -> Vec<f64> {
    a.diagonal().iter().map(|d| 1.0 / d).collect()
}

fn pair_form(x: &[f64], w: &[f64], spread: impl Fn(usize, usize) -> f64) -> f64 {
    let worst = pair_max(x.len(), |i, j| {
        let s = spread(i, j);
        x[i] + x[j] + clamped_sqrt(s * s + 4.0 * x[i] * x[j] * w[i] * w[j])
    });
    2.0 / worst
}

fn single_form(x: &[f64], w: &[f64]) -> f64 {
    let worst = x
        .iter()
        .zip(w)
        .map(|(xi, wi)| (1.0 + wi) * xi)
        .fold(f64::NEG_INFINITY, f64::max);
    1.0 / worst
}

/// Maximum of `f` over ordered pairs `i != j`.
fn pair_max(n: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            best = best.max(f(i, j));
        }
    }
    best
}

fn clamped_sqrt(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
