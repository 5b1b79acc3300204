use std::collections::VecDeque;

use serde::Serialize;

use super::{invert, DenseMatrix};
use crate::error::{Error, Result};

/// Structural and sign classification of a square matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixClass {
    pub is_z_matrix: bool,
    pub positive_diagonal: bool,
    pub is_sdd: bool,
    pub is_wcdd: bool,
    pub is_m_matrix: bool,
    /// `d_i = sum_{j != i} |a_ij| / |a_ii|`; infinite for a zero diagonal entry.
    pub dominance_ratios: Vec<f64>,
    pub zero_tolerance: f64,
}

/// Default sign tolerance: `1e-12 * max |a_ij|`.
pub fn default_eps(a: &DenseMatrix) -> f64 {
    1e-12 * a.max_abs()
}

/// Row dominance ratios `d_i`.
pub fn dominance_ratios(a: &DenseMatrix) -> Vec<f64> {
    (0..a.n())
        .map(|i| {
            let off: f64 = a
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, x)| x.abs())
                .sum();
            let diag = a[(i, i)].abs();
            if diag == 0.0 {
                f64::INFINITY
            } else {
                off / diag
            }
        })
        .collect()
}

pub fn classify(a: &DenseMatrix, eps: f64) -> Result<MatrixClass> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::input(
            "zero tolerance must be a finite nonnegative number",
        ));
    }
    let n = a.n();
    let is_z_matrix = (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] <= eps));
    let positive_diagonal = (0..n).all(|i| a[(i, i)] > eps);
    let d = dominance_ratios(a);
    let is_sdd = d.iter().all(|&x| x < 1.0);
    let is_wcdd = is_sdd || weakly_chained(a, &d);

    let is_m_matrix = is_z_matrix
        && positive_diagonal
        && match invert(a) {
            Ok(inv) => {
                let floor = -eps * inv.inverse.max_abs();
                inv.inverse.as_slice().iter().all(|&x| x >= floor)
            }
            Err(_) => false,
        };

    Ok(MatrixClass {
        is_z_matrix,
        positive_diagonal,
        is_sdd,
        is_wcdd,
        is_m_matrix,
        dominance_ratios: d,
        zero_tolerance: eps,
    })
}

/// Weakly chained dominance: every row is weakly dominant, some row is
/// strict, and each non-strict row reaches a strict one along nonzero
/// off-diagonal entries `a_{i_l, i_{l+1}}`.
fn weakly_chained(a: &DenseMatrix, d: &[f64]) -> bool {
    let n = a.n();
    if d.iter().any(|&x| !(x <= 1.0)) {
        return false;
    }
    // BFS backwards from the strict rows over edges i -> k with a_ik != 0
    let mut reaches = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| d[i] < 1.0).collect();
    if queue.is_empty() {
        return false;
    }
    for &i in &queue {
        reaches[i] = true;
    }
    while let Some(k) = queue.pop_front() {
        for i in 0..n {
            if !reaches[i] && i != k && a[(i, k)] != 0.0 {
                reaches[i] = true;
                queue.push_back(i);
            }
        }
    }
    reaches.into_iter().all(|r| r)
}
