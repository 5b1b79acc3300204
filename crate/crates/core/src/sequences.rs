//! Auxiliary quantities feeding the bounds: the dominance ratios `d_i`, the
//! entry-only diagonal estimates `phi_i`, and the iteration ladder
//!
//! ```text
//! r -> m -> h -> u(0) -> p(1) -> h(1) -> u(1) -> ... -> p(t) -> h(t) -> u(t)
//! ```
//!
//! Pair tables are indexed `(j, i)`: `j` is the row of the defining formula
//! and `i` the reference index (the excluded column). Every quantity for
//! reference `i` depends only on column `i` of the previous stage, so a
//! nonpositive denominator disables exactly one column.
//!
//! All formulas are ratios of entry magnitudes and therefore invariant
//! under `A -> cA` for `c > 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

/// `d_i`, `d = max d_i` and `phi_i = 1 / (a_ii - sum_{k != i} |a_ik| d_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseQuantities {
    pub d: Vec<f64>,
    pub d_max: f64,
    /// Absent where the denominator is not positive.
    pub phi: Vec<Option<f64>>,
}

pub fn base_quantities(a: &DenseMatrix) -> Result<BaseQuantities> {
    let n = a.n();
    check_diagonal(a)?;
    let d: Vec<f64> = (0..n)
        .map(|i| off_diag_abs_sum(a, i, None) / a[(i, i)].abs())
        .collect();
    let d_max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let phi = (0..n)
        .map(|i| {
            let s: f64 = (0..n)
                .filter(|&k| k != i)
                .map(|k| a[(i, k)].abs() * d[k])
                .sum();
            positive_reciprocal(a[(i, i)] - s)
        })
        .collect();
    Ok(BaseQuantities { d, d_max, phi })
}

/// Ladder stage at which a reference column met a positive numerator over a
/// nonpositive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    /// `r_i`
    R,
    /// `h_i`
    H,
    /// `h_i^(t)`
    HT(usize),
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stage::R => write!(f, "r"),
            Stage::H => write!(f, "h"),
            Stage::HT(t) => write!(f, "h^({t})"),
        }
    }
}

/// `n x n` table indexed `(row j, reference i)`; NaN marks absent entries
/// and the unused diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTable {
    n: usize,
    data: Vec<f64>,
}

impl PairTable {
    fn absent(n: usize) -> Self {
        Self {
            n,
            data: vec![f64::NAN; n * n],
        }
    }

    fn set(&mut self, j: usize, i: usize, v: f64) {
        self.data[j * self.n + i] = v;
    }

    fn raw(&self, j: usize, i: usize) -> f64 {
        self.data[j * self.n + i]
    }

    pub fn get(&self, j: usize, i: usize) -> Option<f64> {
        let v = self.raw(j, i);
        (j != i && !v.is_nan()).then_some(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn bit_eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Per-iteration storage of the ladder for `t = 0..=t_max`.
#[derive(Debug, Clone)]
pub struct AuxLadder {
    n: usize,
    t_max: usize,
    r: Vec<Option<f64>>,
    m: PairTable,
    h0: Vec<Option<f64>>,
    /// `u[t]` for `t = 0..=t_max`
    u: Vec<PairTable>,
    /// `p[t - 1]` holds `p^(t)`
    p: Vec<PairTable>,
    ht: Vec<Vec<Option<f64>>>,
    phi_t: Vec<Vec<Option<f64>>>,
    u_max: Vec<Option<f64>>,
    p_max: Vec<Vec<Option<f64>>>,
    p_colsum: Vec<Vec<Option<f64>>>,
    status: Vec<Option<Stage>>,
}

impl AuxLadder {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn r(&self, i: usize) -> Option<f64> {
        self.r[i]
    }

    pub fn m(&self, j: usize, i: usize) -> Option<f64> {
        self.m.get(j, i)
    }

    pub fn h0(&self, i: usize) -> Option<f64> {
        self.h0[i]
    }

    /// `u_ji^(t)` for `0 <= t <= t_max`.
    pub fn u(&self, t: usize, j: usize, i: usize) -> Option<f64> {
        self.u[t].get(j, i)
    }

    /// `p_ji^(t)` for `1 <= t <= t_max`.
    pub fn p(&self, t: usize, j: usize, i: usize) -> Option<f64> {
        self.p[t - 1].get(j, i)
    }

    pub fn p_table(&self, t: usize) -> &PairTable {
        &self.p[t - 1]
    }

    pub fn ht(&self, t: usize, i: usize) -> Option<f64> {
        self.ht[t - 1][i]
    }

    /// `phi_i^(t) = 1 / (a_ii - sum_{j != i} |a_ij| p_ji^(t))`.
    pub fn phi_t(&self, t: usize, i: usize) -> Option<f64> {
        self.phi_t[t - 1][i]
    }

    /// `u_i = max_{j != i} u_ij`.
    pub fn u_max(&self, i: usize) -> Option<f64> {
        self.u_max[i]
    }

    /// `p_i^(t) = max_{j != i} p_ij^(t)`.
    pub fn p_max(&self, t: usize, i: usize) -> Option<f64> {
        self.p_max[t - 1][i]
    }

    /// `sum_{k != i} p_ki^(t)`.
    pub fn p_colsum(&self, t: usize, i: usize) -> Option<f64> {
        self.p_colsum[t - 1][i]
    }

    /// Stage at which reference column `i` became inapplicable, if any.
    pub fn status(&self, i: usize) -> Option<Stage> {
        self.status[i]
    }

    pub fn is_fully_applicable(&self) -> bool {
        self.status.iter().all(Option::is_none)
    }

    /// First inapplicable column and its stage.
    pub fn first_inapplicable(&self) -> Option<(usize, Stage)> {
        self.status
            .iter()
            .enumerate()
            .find_map(|(i, s)| s.map(|s| (i, s)))
    }

    /// Bitwise comparison of every stored value.
    pub fn bit_identical(&self, other: &Self) -> bool {
        fn opt_eq(a: &[Option<f64>], b: &[Option<f64>]) -> bool {
            a.len() == b.len()
                && a.iter().zip(b).all(|(x, y)| match (x, y) {
                    (Some(x), Some(y)) => x.to_bits() == y.to_bits(),
                    (None, None) => true,
                    _ => false,
                })
        }
        fn nested_eq(a: &[Vec<Option<f64>>], b: &[Vec<Option<f64>>]) -> bool {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| opt_eq(x, y))
        }
        fn tables_eq(a: &[PairTable], b: &[PairTable]) -> bool {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.bit_eq(y))
        }
        self.n == other.n
            && self.t_max == other.t_max
            && opt_eq(&self.r, &other.r)
            && self.m.bit_eq(&other.m)
            && opt_eq(&self.h0, &other.h0)
            && tables_eq(&self.u, &other.u)
            && tables_eq(&self.p, &other.p)
            && nested_eq(&self.ht, &other.ht)
            && nested_eq(&self.phi_t, &other.phi_t)
            && opt_eq(&self.u_max, &other.u_max)
            && nested_eq(&self.p_max, &other.p_max)
            && nested_eq(&self.p_colsum, &other.p_colsum)
            && self.status == other.status
    }
}

/// Builds the ladder up to `t_max` (at least 1).
pub fn build_ladder(a: &DenseMatrix, t_max: usize) -> Result<AuxLadder> {
    if t_max < 1 {
        return Err(Error::input("t_max must be at least 1"));
    }
    let n = a.n();
    if n < 2 {
        return Err(Error::input("the iteration ladder needs order n >= 2"));
    }
    check_diagonal(a)?;

    let abs = |j: usize, k: usize| a[(j, k)].abs();
    // sum_{k != j, i} |a_jk| x_k
    let weighted = |j: usize, i: usize, x: &dyn Fn(usize) -> f64| -> f64 {
        (0..n)
            .filter(|&k| k != j && k != i)
            .map(|k| abs(j, k) * x(k))
            .sum()
    };

    let mut ladder = AuxLadder {
        n,
        t_max,
        r: vec![None; n],
        m: PairTable::absent(n),
        h0: vec![None; n],
        u: vec![PairTable::absent(n); t_max + 1],
        p: vec![PairTable::absent(n); t_max],
        ht: vec![vec![None; n]; t_max],
        phi_t: vec![vec![None; n]; t_max],
        u_max: vec![None; n],
        p_max: vec![vec![None; n]; t_max],
        p_colsum: vec![vec![None; n]; t_max],
        status: vec![None; n],
    };

    for i in 0..n {
        let others = || (0..n).filter(move |&j| j != i);

        // r_i
        let r_i = match max_ratio(
            others(),
            |j| abs(j, i),
            |j| abs(j, j) - weighted(j, i, &|_| 1.0),
        ) {
            Some(v) => v,
            None => {
                ladder.status[i] = Some(Stage::R);
                continue;
            }
        };
        ladder.r[i] = Some(r_i);

        // m_ji
        for j in others() {
            let v = (abs(j, i) + weighted(j, i, &|_| 1.0) * r_i) / abs(j, j);
            ladder.m.set(j, i, v);
        }

        // h_i
        let m = &ladder.m;
        let h_i = match max_ratio(
            others(),
            |j| abs(j, i),
            |j| abs(j, j) * m.raw(j, i) - weighted(j, i, &|k| m.raw(k, i)),
        ) {
            Some(v) => v,
            None => {
                ladder.status[i] = Some(Stage::H);
                continue;
            }
        };
        ladder.h0[i] = Some(h_i);

        // u_ji = u_ji^(0)
        for j in others() {
            let v = (abs(j, i) + weighted(j, i, &|k| m.raw(k, i)) * h_i) / abs(j, j);
            ladder.u[0].set(j, i, v);
        }

        for t in 1..=t_max {
            let prev = &ladder.u[t - 1];
            let mut col = vec![f64::NAN; n];
            for j in others() {
                col[j] = (abs(j, i) + weighted(j, i, &|k| prev.raw(k, i))) / abs(j, j);
            }
            for j in others() {
                ladder.p[t - 1].set(j, i, col[j]);
            }
            let p = &ladder.p[t - 1];

            let h_t = match max_ratio(
                others(),
                |j| abs(j, i),
                |j| abs(j, j) * p.raw(j, i) - weighted(j, i, &|k| p.raw(k, i)),
            ) {
                Some(v) => v,
                None => {
                    ladder.status[i] = Some(Stage::HT(t));
                    break;
                }
            };
            ladder.ht[t - 1][i] = Some(h_t);

            let mut next = vec![f64::NAN; n];
            for j in others() {
                next[j] = (abs(j, i) + weighted(j, i, &|k| p.raw(k, i)) * h_t) / abs(j, j);
            }
            for j in others() {
                ladder.u[t].set(j, i, next[j]);
            }
        }
    }

    // a column that failed part-way keeps no partial values
    for i in 0..n {
        if ladder.status[i].is_some() {
            clear_column(&mut ladder, i);
        }
    }

    // phi_i^(t) and column sums read column i only
    for t in 1..=t_max {
        for i in 0..n {
            if ladder.status[i].is_some() {
                continue;
            }
            let p = &ladder.p[t - 1];
            let s: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| abs(i, j) * p.raw(j, i))
                .sum();
            ladder.phi_t[t - 1][i] = positive_reciprocal(a[(i, i)] - s);
            ladder.p_colsum[t - 1][i] = Some((0..n).filter(|&k| k != i).map(|k| p.raw(k, i)).sum());
        }
    }

    // row maxima need every column
    for i in 0..n {
        ladder.u_max[i] = row_max(&ladder.u[0], i, &ladder.status);
        for t in 1..=t_max {
            ladder.p_max[t - 1][i] = row_max(&ladder.p[t - 1], i, &ladder.status);
        }
    }

    Ok(ladder)
}

fn clear_column(ladder: &mut AuxLadder, i: usize) {
    let n = ladder.n;
    ladder.r[i] = None;
    ladder.h0[i] = None;
    for j in 0..n {
        ladder.m.set(j, i, f64::NAN);
        for table in ladder.u.iter_mut().chain(ladder.p.iter_mut()) {
            table.set(j, i, f64::NAN);
        }
    }
    for ht in &mut ladder.ht {
        ht[i] = None;
    }
}

fn row_max(table: &PairTable, i: usize, status: &[Option<Stage>]) -> Option<f64> {
    let n = table.n;
    let mut best = f64::NEG_INFINITY;
    for j in (0..n).filter(|&j| j != i) {
        if status[j].is_some() {
            return None;
        }
        best = best.max(table.raw(i, j));
    }
    Some(best)
}

/// `max_j num(j) / den(j)` where zero numerators contribute 0 and a positive
/// numerator over a nonpositive denominator makes the whole maximum
/// inapplicable (`None`).
fn max_ratio(
    indices: impl Iterator<Item = usize>,
    num: impl Fn(usize) -> f64,
    den: impl Fn(usize) -> f64,
) -> Option<f64> {
    let mut best: f64 = 0.0;
    for j in indices {
        let top = num(j);
        if top == 0.0 {
            continue;
        }
        let bottom = den(j);
        if !(bottom > 0.0) {
            return None;
        }
        best = best.max(top / bottom);
    }
    Some(best)
}

fn positive_reciprocal(x: f64) -> Option<f64> {
    (x > 0.0).then(|| 1.0 / x)
}

fn off_diag_abs_sum(a: &DenseMatrix, i: usize, skip: Option<usize>) -> f64 {
    (0..a.n())
        .filter(|&k| k != i && Some(k) != skip)
        .map(|k| a[(i, k)].abs())
        .sum()
}

fn check_diagonal(a: &DenseMatrix) -> Result<()> {
    match (0..a.n()).find(|&i| a[(i, i)] == 0.0) {
        Some(i) => Err(Error::input(format!(
            "zero diagonal entry at row {}",
            i + 1
        ))),
        None => Ok(()),
    }
}
