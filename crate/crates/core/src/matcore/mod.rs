//! Dense matrices, M-matrix classification, inversion, and the Perron-root
//! reference oracle for `tau(A) = 1 / rho(A^{-1})`.

mod classify;
mod inverse;
mod matrix;
mod spectral;

pub use classify::{classify, default_eps, dominance_ratios, MatrixClass};
pub use inverse::{invert, Inversion, SINGULAR_PIVOT_RATIO};
pub use matrix::DenseMatrix;
pub use spectral::{
    jacobi_matrix, spectral_radius_nonneg, tau_oracle, PerronEstimate, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};

use crate::error::Result;

/// Entrywise product `[a_ij * b_ij]`.
pub fn hadamard(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.check_same_order(b)?;
    let data = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x * y)
        .collect();
    DenseMatrix::new(a.n(), data)
}

/// Nonnegative (within `eps`) with all row and column sums in `[1-eps, 1+eps]`.
pub fn is_doubly_stochastic(m: &DenseMatrix, eps: f64) -> bool {
    let near_one = |s: &f64| (s - 1.0).abs() <= eps;
    m.as_slice().iter().all(|&x| x >= -eps)
        && m.row_sums().iter().all(near_one)
        && m.col_sums().iter().all(near_one)
}
