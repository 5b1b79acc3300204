//! Random instance generation and batch verification of the bound
//! inequalities against the Perron-root oracle.
//!
//! All randomness comes from `ChaCha8Rng` seeded with `seed_from_u64`, which
//! produces the same stream on every platform. Draw order is fixed per
//! generator (documented on each function), so a [`GenSpec`] always yields
//! the same matrix bit for bit.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{full_report, hadamard_upper, BoundKind, BoundReport, Method};
use crate::error::{Error, Result};
use crate::matcore::{
    classify, default_eps, hadamard, invert, is_doubly_stochastic, jacobi_matrix,
    spectral_radius_nonneg, DenseMatrix, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::sequences::build_ladder;

pub const DEFAULT_MARGIN: f64 = 0.1;

/// Generator family of a [`GenSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Strictly diagonally dominant Z-matrix with positive diagonal.
    SddM,
    /// Equal diagonal and doubly stochastic inverse.
    DsInverse { strength: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenSpec {
    pub n: usize,
    pub seed: u64,
    pub dominance_margin: f64,
    pub density: f64,
    pub magnitude: f64,
    pub family: Family,
}

impl GenSpec {
    pub fn sdd(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            dominance_margin: DEFAULT_MARGIN,
            density: 1.0,
            magnitude: 1.0,
            family: Family::SddM,
        }
    }

    pub fn ds_inverse(n: usize, seed: u64, strength: f64) -> Self {
        Self {
            family: Family::DsInverse { strength },
            ..Self::sdd(n, seed)
        }
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    pub fn with_magnitude(mut self, magnitude: f64) -> Self {
        self.magnitude = magnitude;
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.dominance_margin = margin;
        self
    }

    pub fn generate(&self) -> Result<DenseMatrix> {
        match self.family {
            Family::SddM => gen_sdd_m(self),
            Family::DsInverse { strength } => gen_ds_inverse(self.n, self.seed, strength),
        }
    }

    /// `count` strictly dominant specs with orders in `3..=12`, seeds
    /// `base_seed, base_seed + 1, ...` and densities cycling through
    /// 1.0, 0.6, 0.3.
    pub fn sdd_suite(count: usize, base_seed: u64) -> Vec<GenSpec> {
        const DENSITIES: [f64; 3] = [1.0, 0.6, 0.3];
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
        (0..count)
            .map(|k| {
                let n = rng.random_range(3..=12);
                GenSpec::sdd(n, base_seed.wrapping_add(k as u64)).with_density(DENSITIES[k % 3])
            })
            .collect()
    }

    /// `count` doubly-stochastic-inverse specs, orders in `3..=12`,
    /// strengths in `[0.5, 20)`.
    pub fn ds_suite(count: usize, base_seed: u64) -> Vec<GenSpec> {
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed ^ 0xD5D5_D5D5_D5D5_D5D5);
        (0..count)
            .map(|k| {
                let n = rng.random_range(3..=12);
                let strength = 0.5 + 19.5 * rng.random::<f64>();
                GenSpec::ds_inverse(n, base_seed.wrapping_add(k as u64), strength)
            })
            .collect()
    }
}

/// Strictly diagonally dominant M-matrix.
///
/// Off-diagonal entries are visited row-major; each consumes two draws: a
/// magnitude `x = magnitude * (1 - u)` in `(0, magnitude]` and a keep test
/// `v < density`. The entry is `-x` if kept and 0 otherwise. Then each row
/// draws its margin `dominance_margin * (1 + u)` and sets
/// `a_ii = sum_{j != i} |a_ij| + margin`.
pub fn gen_sdd_m(spec: &GenSpec) -> Result<DenseMatrix> {
    if spec.n < 2 {
        return Err(Error::input("generator needs n >= 2"));
    }
    if !(spec.dominance_margin > 0.0) || !(spec.magnitude > 0.0) {
        return Err(Error::input(
            "dominance margin and magnitude must be positive",
        ));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(Error::input("density must lie in (0, 1]"));
    }
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut a = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let x = spec.magnitude * (1.0 - rng.random::<f64>());
            let keep = rng.random::<f64>() < spec.density;
            if keep {
                a[(i, j)] = -x;
            }
        }
    }
    for i in 0..n {
        let margin = spec.dominance_margin * (1.0 + rng.random::<f64>());
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        a[(i, i)] = off + margin;
    }
    Ok(a)
}

/// `A = (s + 1) I - P`, with `P` equal to `s` times a convex combination of
/// three random derangement permutation matrices.
///
/// Draw order: for each of the three permutations, Fisher-Yates shuffles of
/// `0..n` repeated until no fixed point remains, then one weight draw
/// `1 - u`; weights are normalised to sum to one.
pub fn gen_ds_inverse(n: usize, seed: u64, strength: f64) -> Result<DenseMatrix> {
    if n < 3 {
        return Err(Error::input(
            "doubly stochastic inverse family needs n >= 3",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::with_capacity(3);
    for _ in 0..3 {
        let perm = random_derangement(n, &mut rng);
        let w = 1.0 - rng.random::<f64>();
        parts.push((w, perm));
    }
    let total: f64 = parts.iter().map(|(w, _)| w).sum();
    for (w, _) in &mut parts {
        *w /= total;
    }
    ds_inverse_from_derangements(n, &parts, strength)
}

/// Builds `(s + 1) I - s * sum_k w_k Pi_k` from weighted derangements.
pub fn ds_inverse_from_derangements(
    n: usize,
    parts: &[(f64, Vec<usize>)],
    strength: f64,
) -> Result<DenseMatrix> {
    if !(strength > 0.0) || !strength.is_finite() {
        return Err(Error::input("strength must be positive"));
    }
    if parts.is_empty() {
        return Err(Error::input("need at least one permutation"));
    }
    let total: f64 = parts.iter().map(|(w, _)| *w).sum();
    if parts.iter().any(|(w, _)| !(*w > 0.0)) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::input("weights must be positive and sum to one"));
    }
    let mut a = DenseMatrix::zeros(n);
    for (w, perm) in parts {
        if !is_derangement(perm, n) {
            return Err(Error::input("permutation is not a derangement of 0..n"));
        }
        for (i, &j) in perm.iter().enumerate() {
            a[(i, j)] -= strength * w;
        }
    }
    for i in 0..n {
        a[(i, i)] = strength + 1.0;
    }
    Ok(a)
}

fn random_derangement(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        perm.shuffle(rng);
        if perm.iter().enumerate().all(|(i, &p)| i != p) {
            return perm;
        }
    }
}

fn is_derangement(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n
        && perm.iter().enumerate().all(|(i, &p)| {
            let fresh = p < n && p != i && !seen[p];
            if fresh {
                seen[p] = true;
            }
            fresh
        })
}

/// Nonnegative weight matrix with entries in `[0, 2)`, drawn row-major.
pub fn gen_weights(n: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    let data = (0..n * n).map(|_| 2.0 * rng.random::<f64>()).collect();
    DenseMatrix::new(n, data).expect("finite weights")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub property: String,
    pub spec: Option<GenSpec>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub trials: usize,
    pub failures: Vec<Failure>,
    /// Worst `tau - (best applicable lower bound)` over all trials.
    pub max_gap: f64,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-matrix outcome of [`check_matrix`].
#[derive(Debug, Clone, Default)]
pub struct MatrixCheck {
    /// `(property, detail)` pairs.
    pub failures: Vec<(String, String)>,
    pub gap: Option<f64>,
}

/// Slack used by every inequality check.
#[derive(Debug, Clone, Copy)]
pub struct Slack {
    pub soundness: f64,
    pub monotone: f64,
    pub estimate_upper: f64,
    pub estimate_lower: f64,
    pub hadamard: f64,
    pub ds_ordering: f64,
    pub ds_jacobi: f64,
}

impl Default for Slack {
    fn default() -> Self {
        Self {
            soundness: 1e-8,
            monotone: 1e-12,
            estimate_upper: 1e-9,
            estimate_lower: 1e-12,
            hadamard: 1e-8,
            ds_ordering: 1e-10,
            ds_jacobi: 1e-9,
        }
    }
}

/// Runs every property over the generated matrices.
pub fn check_properties(specs: &[GenSpec], t_max: usize) -> Result<PropertyReport> {
    if specs.is_empty() {
        return Err(Error::input("no generator specs given"));
    }
    if t_max < 1 {
        return Err(Error::input("t_max must be at least 1"));
    }
    let mut failures = Vec::new();
    let mut max_gap = f64::NEG_INFINITY;
    for spec in specs {
        let a = match spec.generate() {
            Ok(a) => a,
            Err(e) => {
                failures.push(Failure {
                    property: "generator".into(),
                    spec: Some(*spec),
                    detail: e.to_string(),
                });
                continue;
            }
        };
        let doubly_stochastic = matches!(spec.family, Family::DsInverse { .. });
        let check = check_matrix(&a, t_max, spec.seed, doubly_stochastic);
        if let Some(g) = check.gap {
            max_gap = max_gap.max(g);
        }
        failures.extend(
            check
                .failures
                .into_iter()
                .map(|(property, detail)| Failure {
                    property,
                    spec: Some(*spec),
                    detail,
                }),
        );
    }
    failures.sort_by_key(|f| f.spec.map(|s| s.seed));
    Ok(PropertyReport {
        trials: specs.len(),
        failures,
        max_gap: if max_gap.is_finite() { max_gap } else { 0.0 },
    })
}

/// Checks one matrix. `weight_seed` seeds the nonnegative matrix used for
/// the Hadamard-product chain; `doubly_stochastic` enables the checks that
/// need an equal diagonal and doubly stochastic inverse.
pub fn check_matrix(
    a: &DenseMatrix,
    t_max: usize,
    weight_seed: u64,
    doubly_stochastic: bool,
) -> MatrixCheck {
    let slack = Slack::default();
    let mut out = MatrixCheck::default();
    let mut fail = |p: &str, d: String| out.failures.push((p.to_string(), d));

    let class = match classify(a, default_eps(a)) {
        Ok(c) => c,
        Err(e) => {
            fail("classify", e.to_string());
            return out;
        }
    };
    let report = match full_report(a, t_max, DEFAULT_TOL) {
        Ok(r) => r,
        Err(e) => {
            fail("oracle", e.to_string());
            return out;
        }
    };
    if !class.is_m_matrix {
        // nothing certified, nothing to compare
        if let Some(r) = report.rows.iter().find(|r| r.applicable) {
            fail(
                "applicability",
                format!("{} applicable on a non-M-matrix", r.method),
            );
        }
        return out;
    }
    let tau = report.tau.expect("M-matrix report carries tau");
    out.gap = report.best_lower().map(|b| tau - b);

    // soundness
    for row in report.rows.iter().filter(|r| r.applicable) {
        let v = row.value.expect("applicable row has a value");
        let bad = match row.kind {
            BoundKind::Lower => v > tau + slack.soundness,
            BoundKind::Upper => v < tau - slack.soundness,
        };
        if bad {
            fail(
                "soundness",
                format!("{}{} = {v} vs tau = {tau}", row.method, fmt_t(row.t)),
            );
        }
    }

    // monotone sequences and the pair/single ordering
    for m in [
        Method::GammaT,
        Method::OmegaT,
        Method::GammaTildeT,
        Method::OmegaTildeT,
    ] {
        if m.needs_sdd() && !class.is_sdd {
            continue;
        }
        let seq = report.sequence(m);
        for t in 1..seq.len() {
            if let (Some(prev), Some(next)) = (seq[t - 1], seq[t]) {
                if next < prev - slack.monotone {
                    fail(
                        "monotonicity",
                        format!("{m} drops from {prev} to {next} at t = {}", t + 1),
                    );
                }
            }
        }
    }
    for t in 1..=t_max {
        if let (Some(g), Some(o)) = (
            report.value(Method::GammaT, Some(t)),
            report.value(Method::OmegaT, Some(t)),
        ) {
            if g < o - slack.monotone {
                fail(
                    "pair_vs_single",
                    format!("gamma_{t} = {g} < omega_{t} = {o}"),
                );
            }
        }
    }

    let inv = match invert(a) {
        Ok(i) => i.inverse,
        Err(e) => {
            fail("inverse", e.to_string());
            return out;
        }
    };
    let ladder = match build_ladder(a, t_max) {
        Ok(l) => l,
        Err(e) => {
            fail("ladder", e.to_string());
            return out;
        }
    };

    if class.is_sdd {
        for f in ladder_chain_violations(a, &ladder, slack.estimate_lower) {
            fail("ladder_chain", f);
        }
        for f in inverse_estimate_violations(a, &inv, &ladder, &slack) {
            fail("inverse_estimates", f);
        }
    }

    // Hadamard product chain with a random nonnegative weight matrix
    let b = gen_weights(a.n(), weight_seed);
    match hadamard_chain(a, &inv, &b, &ladder, t_max) {
        Ok(violations) => {
            for v in violations {
                fail("hadamard_chain", v);
            }
        }
        Err(e) => fail("hadamard_chain", e.to_string()),
    }

    if doubly_stochastic {
        for v in ds_family_violations(a, &inv, &report, &slack) {
            fail("doubly_stochastic_family", v);
        }
    }
    out
}

fn fmt_t(t: Option<usize>) -> String {
    t.map(|t| format!("(t={t})")).unwrap_or_default()
}

/// `1 > r_i >= m_ji >= u_ji^(0) >= p_ji^(1) >= u_ji^(1) >= ... >= 0`.
pub fn ladder_chain_violations(
    a: &DenseMatrix,
    ladder: &crate::sequences::AuxLadder,
    tol: f64,
) -> Vec<String> {
    let n = a.n();
    let mut out = Vec::new();
    for i in 0..n {
        let Some(r) = ladder.r(i) else {
            out.push(format!("column {} not applicable", i + 1));
            continue;
        };
        if !(r < 1.0) {
            out.push(format!("r_{} = {r} is not below 1", i + 1));
        }
        for j in (0..n).filter(|&j| j != i) {
            let mut chain = vec![("r".to_string(), r)];
            chain.push(("m".into(), ladder.m(j, i).unwrap_or(f64::NAN)));
            chain.push(("u(0)".into(), ladder.u(0, j, i).unwrap_or(f64::NAN)));
            for t in 1..=ladder.t_max() {
                chain.push((format!("p({t})"), ladder.p(t, j, i).unwrap_or(f64::NAN)));
                chain.push((format!("u({t})"), ladder.u(t, j, i).unwrap_or(f64::NAN)));
            }
            chain.push(("0".into(), 0.0));
            for w in chain.windows(2) {
                let (ref hn, hv) = w[0];
                let (ref ln, lv) = w[1];
                if !(hv >= lv - tol) {
                    out.push(format!("({}, {}): {hn} = {hv} < {ln} = {lv}", j + 1, i + 1));
                }
            }
        }
    }
    out
}

/// `alpha_ji <= p_ji^(t) alpha_ii` and `1/a_ii <= alpha_ii <= phi_i^(t)`,
/// plus the decrease of `phi_i^(t)` in `t`.
pub fn inverse_estimate_violations(
    a: &DenseMatrix,
    inv: &DenseMatrix,
    ladder: &crate::sequences::AuxLadder,
    slack: &Slack,
) -> Vec<String> {
    let n = a.n();
    let mut out = Vec::new();
    for i in 0..n {
        let alpha_ii = inv[(i, i)];
        if alpha_ii < 1.0 / a[(i, i)] - slack.estimate_lower {
            out.push(format!("alpha_{0}{0} = {alpha_ii} below 1/a_ii", i + 1));
        }
        let mut prev_phi = f64::INFINITY;
        for t in 1..=ladder.t_max() {
            let Some(phi) = ladder.phi_t(t, i) else {
                out.push(format!("phi_{}^({t}) missing", i + 1));
                continue;
            };
            if alpha_ii > phi + slack.estimate_upper {
                out.push(format!(
                    "alpha_{0}{0} = {alpha_ii} above phi^({t}) = {phi}",
                    i + 1
                ));
            }
            if phi > prev_phi + slack.monotone {
                out.push(format!("phi_{}^({t}) increased", i + 1));
            }
            prev_phi = phi;
            for j in (0..n).filter(|&j| j != i) {
                let p = ladder.p(t, j, i).unwrap_or(f64::NAN);
                if !(inv[(j, i)] <= p * alpha_ii + slack.estimate_upper) {
                    out.push(format!(
                        "alpha_{}{} = {} above p^({t}) alpha_ii = {}",
                        j + 1,
                        i + 1,
                        inv[(j, i)],
                        p * alpha_ii
                    ));
                }
            }
        }
    }
    out
}

/// `rho(B o A^{-1}) <= tight <= loose` for every `t`.
pub fn hadamard_chain(
    a: &DenseMatrix,
    inv: &DenseMatrix,
    b: &DenseMatrix,
    ladder: &crate::sequences::AuxLadder,
    t_max: usize,
) -> Result<Vec<String>> {
    let slack = Slack::default().hadamard;
    let product = hadamard(b, inv)?;
    let rho = spectral_radius_nonneg(&product, DEFAULT_TOL, DEFAULT_MAX_ITER)?.radius;
    let mut out = Vec::new();
    for t in 1..=t_max {
        let Some(h) = hadamard_upper(a, inv, b, ladder, t)? else {
            continue;
        };
        if rho > h.tight + slack {
            out.push(format!(
                "rho = {rho} above pair bound {} at t = {t}",
                h.tight
            ));
        }
        if h.tight > h.loose + slack {
            out.push(format!(
                "pair bound {} above single bound {} at t = {t}",
                h.tight, h.loose
            ));
        }
    }
    Ok(out)
}

fn ds_family_violations(
    a: &DenseMatrix,
    inv: &DenseMatrix,
    report: &BoundReport,
    slack: &Slack,
) -> Vec<String> {
    let mut out = Vec::new();
    let diag = a.diagonal();
    if diag.iter().any(|&d| d != diag[0]) {
        out.push("diagonal entries differ".into());
    }
    if !is_doubly_stochastic(inv, 1e-10) {
        out.push("inverse is not doubly stochastic".into());
    }
    match jacobi_matrix(a).and_then(|j| spectral_radius_nonneg(&j, DEFAULT_TOL, DEFAULT_MAX_ITER)) {
        Ok(est) => {
            let expected = 1.0 - 1.0 / diag[0];
            if (est.radius - expected).abs() > slack.ds_jacobi {
                out.push(format!(
                    "rho(J_A) = {} differs from 1 - 1/a_ii = {expected}",
                    est.radius
                ));
            }
        }
        Err(e) => out.push(format!("rho(J_A): {e}")),
    }
    let single = |m: Method| report.value(m, None);
    let (Some(jacobi_single), Some(jacobi_pair), Some(phi_single), Some(phi_pair)) = (
        single(Method::Th31Tianhuang),
        single(Method::LiInverse),
        single(Method::Cor34Tianhuang),
        single(Method::LiEntries),
    ) else {
        out.push("prior bounds not applicable".into());
        return out;
    };
    let eps = slack.ds_ordering;
    let mut need = |cond: bool, what: String| {
        if !cond {
            out.push(what);
        }
    };
    need(
        jacobi_pair >= jacobi_single - eps,
        format!("jacobi pair bound {jacobi_pair} < single {jacobi_single}"),
    );
    for t in 1..=report.t_max {
        let get = |m: Method| report.value(m, Some(t));
        let (Some(g), Some(o), Some(gt), Some(ot)) = (
            get(Method::GammaT),
            get(Method::OmegaT),
            get(Method::GammaTildeT),
            get(Method::OmegaTildeT),
        ) else {
            need(false, format!("sequence bounds missing at t = {t}"));
            continue;
        };
        need(
            g >= o - eps,
            format!("(a) gamma_{t} = {g} < omega_{t} = {o}"),
        );
        need(
            o >= jacobi_single - eps,
            format!("(a) omega_{t} = {o} < {jacobi_single}"),
        );
        need(
            g >= jacobi_pair - eps,
            format!("(b) gamma_{t} = {g} < {jacobi_pair}"),
        );
        need(
            ot >= phi_single - eps,
            format!("(c) omega_tilde_{t} = {ot} < {phi_single}"),
        );
        need(
            gt >= phi_pair - eps,
            format!("(d) gamma_tilde_{t} = {gt} < {phi_pair}"),
        );
    }
    out
}
