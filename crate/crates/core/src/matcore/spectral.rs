use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::{invert, DenseMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Perron root estimate from shifted power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerronEstimate {
    pub radius: f64,
    /// `||(B+I)v - (radius+1)v||_inf / ||v||_inf` at the final iterate,
    /// `B` the diagonal block attaining the radius.
    pub residual: f64,
    pub iterations: usize,
}

/// Jacobi iteration matrix `G^{-1}(G - A)`, `G` the diagonal part of `a`.
pub fn jacobi_matrix(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.n();
    let mut j = DenseMatrix::zeros(n);
    for r in 0..n {
        let d = a[(r, r)];
        if d == 0.0 {
            return Err(Error::input(format!(
                "zero diagonal entry at row {}",
                r + 1
            )));
        }
        for c in 0..n {
            if c != r {
                j[(r, c)] = -a[(r, c)] / d;
            }
        }
    }
    Ok(j)
}

/// Spectral radius of a nonnegative matrix.
///
/// The matrix is split into the strongly connected components of its
/// nonzero pattern; `rho(M)` is the largest radius over the diagonal blocks.
/// A one-node block contributes its diagonal entry. Larger blocks are
/// irreducible, and power iteration runs on `block / s + I` (`s` the
/// block's largest row sum) from the all-ones vector; the shift makes them
/// primitive, so cyclic spectra (e.g. permutation-like blocks) do not
/// stall. The estimate is `s` times the Rayleigh quotient minus one. Iteration stops once the geometric extrapolation of
/// the last two steps, `|d_k| / (1 - |d_k / d_{k-1}|)`, drops below
/// `tol * max(1, estimate)`.
///
/// Splitting first matters for reducible input: an acyclic pattern makes
/// `M` nilpotent, and the shifted iteration would then converge only like
/// `1/k`.
pub fn spectral_radius_nonneg(
    m: &DenseMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<PerronEstimate> {
    if !(tol > 0.0) {
        return Err(Error::input("tolerance must be positive"));
    }
    if max_iter == 0 {
        return Err(Error::input("max_iter must be positive"));
    }
    let neg_tol = 1e-12 * m.max_abs();
    if m.as_slice().iter().any(|&x| x < -neg_tol) {
        return Err(Error::input(
            "spectral_radius_nonneg needs a nonnegative matrix",
        ));
    }
    let n = m.n();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for r in 0..n {
        for c in 0..n {
            if r != c && m[(r, c)] > 0.0 {
                graph.add_edge(nodes[r], nodes[c], ());
            }
        }
    }
    let mut components = tarjan_scc(&graph);
    // fixed order, independent of the traversal
    for comp in &mut components {
        comp.sort();
    }
    components.sort();

    let mut best = PerronEstimate {
        radius: 0.0,
        residual: 0.0,
        iterations: 0,
    };
    let mut iterations = 0;
    for comp in components {
        let idx: Vec<usize> = comp.iter().map(|v| v.index()).collect();
        let est = if idx.len() == 1 {
            PerronEstimate {
                radius: m[(idx[0], idx[0])].max(0.0),
                residual: 0.0,
                iterations: 0,
            }
        } else {
            let block = DenseMatrix::from_rows(
                &idx.iter()
                    .map(|&r| idx.iter().map(|&c| m[(r, c)].max(0.0)).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            )?;
            perron_irreducible(&block, tol, max_iter)?
        };
        iterations += est.iterations;
        if est.radius > best.radius {
            best = est;
        }
    }
    best.iterations = iterations;
    Ok(best)
}

/// Shifted power iteration on an irreducible nonnegative block, run on
/// `block / s + I` with `s` the largest row sum, so the shift is in
/// proportion to the radius and the iteration is invariant under scaling.
fn perron_irreducible(block: &DenseMatrix, tol: f64, max_iter: usize) -> Result<PerronEstimate> {
    let n = block.n();
    let scale = block.row_sums().into_iter().fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(PerronEstimate {
            radius: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    let m = DenseMatrix::new(n, block.as_slice().iter().map(|x| x / scale).collect())?;

    let shifted_mul = |v: &[f64]| -> Vec<f64> {
        let mut w = m.matvec(v);
        for (wi, vi) in w.iter_mut().zip(v) {
            *wi += vi;
        }
        w
    };
    let rayleigh = |v: &[f64], w: &[f64]| -> f64 {
        let num: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
        let den: f64 = v.iter().map(|a| a * a).sum();
        num / den
    };
    let residual_of = |v: &[f64], w: &[f64], lambda: f64| -> f64 {
        let vnorm = inf_norm(v);
        let r = v
            .iter()
            .zip(w)
            .fold(0.0_f64, |acc, (vi, wi)| acc.max((wi - lambda * vi).abs()));
        r / vnorm
    };

    let mut v = vec![1.0; n];
    let mut w = shifted_mul(&v);
    let mut lambda = rayleigh(&v, &w);
    let mut prev_step = f64::INFINITY;
    for iter in 1..=max_iter {
        let norm = inf_norm(&w);
        v = w.iter().map(|x| x / norm).collect();
        w = shifted_mul(&v);
        let next = rayleigh(&v, &w);
        let step = (next - lambda).abs();
        // remaining error of a geometric sequence with ratio q is step * q / (1 - q)
        let q = if prev_step > 0.0 {
            step / prev_step
        } else {
            0.0
        };
        let error = if q < 1.0 {
            step / (1.0 - q)
        } else {
            f64::INFINITY
        };
        let settled = step == 0.0 || error < tol * next.abs().max(1.0);
        lambda = next;
        prev_step = step;
        if settled {
            return Ok(PerronEstimate {
                radius: scale * (lambda - 1.0).max(0.0),
                residual: scale * residual_of(&v, &w, lambda),
                iterations: iter,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        estimate: scale * (lambda - 1.0),
        residual: scale * residual_of(&v, &w, lambda),
    })
}

/// Reference value of the minimum eigenvalue: `1 / rho(A^{-1})`.
///
/// A singular input reports [`Error::Singular`] before the M-matrix check.
pub fn tau_oracle(a: &DenseMatrix, tol: f64) -> Result<f64> {
    let inv = invert(a)?;
    let class = super::classify(a, super::default_eps(a))?;
    if !class.is_m_matrix {
        return Err(Error::NotMMatrix);
    }
    let rho = spectral_radius_nonneg(&inv.inverse, tol, DEFAULT_MAX_ITER)?;
    Ok(1.0 / rho.radius)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_abs_diff_eq;

    #[test]
    fn jacobi_of_small_and_diagonal() {
        let a = DenseMatrix::from_rows(&[[2.0, -1.0], [-1.0, 2.0]]).unwrap();
        let j = jacobi_matrix(&a).unwrap();
        assert_eq!(
            j,
            DenseMatrix::from_rows(&[[0.0, 0.5], [0.5, 0.0]]).unwrap()
        );
        let d = DenseMatrix::from_diagonal(&[3.0, -2.0, 5.0]).unwrap();
        assert_eq!(jacobi_matrix(&d).unwrap(), DenseMatrix::zeros(3));
        let bad = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 2.0]]).unwrap();
        assert!(matches!(jacobi_matrix(&bad), Err(Error::Input(_))));
    }

    #[test]
    fn jacobi_of_uniform_example() {
        let j = jacobi_matrix(&fixtures::example3()).unwrap();
        for r in 0..10 {
            for c in 0..10 {
                let expected = if r == c { 0.0 } else { 0.1 };
                assert_abs_diff_eq!(j[(r, c)], expected, epsilon = 1e-16);
            }
        }
    }

    #[test]
    fn radius_of_periodic_two_by_two() {
        // eigenvalues +-1/2; unshifted power iteration would oscillate
        let m = DenseMatrix::from_rows(&[[0.0, 0.5], [0.5, 0.0]]).unwrap();
        let est = spectral_radius_nonneg(&m, 1e-12, 1000).unwrap();
        assert_abs_diff_eq!(est.radius, 0.5, epsilon = 1e-12);
        assert!(est.residual < 1e-10);
    }

    #[test]
    fn radius_of_cyclic_permutation() {
        let mut m = DenseMatrix::zeros(6);
        for i in 0..6 {
            m[(i, (i + 1) % 6)] = 1.0;
        }
        let est = spectral_radius_nonneg(&m, 1e-12, DEFAULT_MAX_ITER).unwrap();
        assert_abs_diff_eq!(est.radius, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn radius_of_uniform_jacobi() {
        let j = jacobi_matrix(&fixtures::example3()).unwrap();
        let est = spectral_radius_nonneg(&j, 1e-12, DEFAULT_MAX_ITER).unwrap();
        assert_abs_diff_eq!(est.radius, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn radius_of_nilpotent_and_reducible() {
        let mut m = DenseMatrix::zeros(8);
        for r in 0..8 {
            for c in r + 1..8 {
                m[(r, c)] = 0.7;
            }
        }
        let est = spectral_radius_nonneg(&m, 1e-12, 100).unwrap();
        assert_eq!(est.radius, 0.0);
        // two irreducible blocks coupled one way, plus a loop on its own
        let m = DenseMatrix::from_rows(&[
            [0.0, 0.5, 9.0, 0.0, 0.0],
            [0.5, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.9, 0.0],
            [0.0, 0.0, 0.9, 0.0, 0.0],
            [0.0, 0.0, 0.0, 3.0, 0.2],
        ])
        .unwrap();
        let est = spectral_radius_nonneg(&m, 1e-12, 1000).unwrap();
        assert_abs_diff_eq!(est.radius, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn radius_of_zero_matrix() {
        let est = spectral_radius_nonneg(&DenseMatrix::zeros(4), 1e-12, 10).unwrap();
        assert_eq!(est.radius, 0.0);
    }

    #[test]
    fn radius_rejects_negative_entries_and_bad_params() {
        let m = DenseMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert!(spectral_radius_nonneg(&m, 1e-12, 10).is_err());
        let ok = DenseMatrix::identity(2);
        assert!(spectral_radius_nonneg(&ok, 0.0, 10).is_err());
        assert!(spectral_radius_nonneg(&ok, 1e-12, 0).is_err());
    }

    #[test]
    fn non_convergence_reports_last_estimate() {
        // slowly mixing chain: second eigenvalue close to the first
        let n = 40;
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            m[(i, (i + 1) % n)] = 1.0;
        }
        m[(0, 0)] = 1e-3;
        match spectral_radius_nonneg(&m, 1e-15, 3) {
            Err(Error::NoConvergence {
                iterations,
                estimate,
                residual,
            }) => {
                assert_eq!(iterations, 3);
                assert!(estimate.is_finite() && residual.is_finite());
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn oracle_on_diagonal_and_uniform() {
        let d = DenseMatrix::from_diagonal(&[2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(tau_oracle(&d, 1e-12).unwrap(), 2.0, epsilon = 1e-11);
        assert_abs_diff_eq!(
            tau_oracle(&fixtures::example3(), 1e-12).unwrap(),
            1.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn oracle_rejects_non_m_matrix() {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(tau_oracle(&a, 1e-12), Err(Error::NotMMatrix));
        let s = DenseMatrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap();
        assert!(matches!(tau_oracle(&s, 1e-12), Err(Error::Singular { .. })));
    }
}
