use super::DenseMatrix;
use crate::error::{Error, Result};

/// Relative pivot threshold below which a matrix is treated as singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

/// An inverse together with its verification residual `max |A X - I|`.
#[derive(Debug, Clone)]
pub struct Inversion {
    pub inverse: DenseMatrix,
    pub residual: f64,
}

/// Inverts `a` by Gauss-Jordan elimination with partial pivoting, then
/// applies one step of iterative refinement `X <- X + X (I - A X)`.
pub fn invert(a: &DenseMatrix) -> Result<Inversion> {
    let n = a.n();
    let scale = a.max_abs();
    if scale == 0.0 {
        return Err(Error::Singular {
            column: 1,
            pivot: 0.0,
        });
    }
    let threshold = SINGULAR_PIVOT_RATIO * scale;

    let mut work = a.clone();
    let mut inv = DenseMatrix::identity(n);
    for col in 0..n {
        let (pivot_row, pivot_abs) =
            (col..n)
                .map(|r| (r, work[(r, col)].abs()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs < threshold {
            return Err(Error::Singular {
                column: col + 1,
                pivot: pivot_abs,
            });
        }
        if pivot_row != col {
            swap_rows(&mut work, pivot_row, col);
            swap_rows(&mut inv, pivot_row, col);
        }
        let p = work[(col, col)];
        for j in 0..n {
            work[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = work[(r, col)];
            if factor == 0.0 {
                continue;
            }
            for j in 0..n {
                work[(r, j)] -= factor * work[(col, j)];
                inv[(r, j)] -= factor * inv[(col, j)];
            }
        }
    }

    // one refinement pass
    let ax = a.matmul(&inv)?;
    let mut defect = DenseMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            defect[(i, j)] -= ax[(i, j)];
        }
    }
    let correction = inv.matmul(&defect)?;
    let mut refined = inv;
    for i in 0..n {
        for j in 0..n {
            refined[(i, j)] += correction[(i, j)];
        }
    }

    let residual = a.matmul(&refined)?.max_abs_deviation_from_identity();
    Ok(Inversion {
        inverse: refined,
        residual,
    })
}

fn swap_rows(m: &mut DenseMatrix, a: usize, b: usize) {
    for j in 0..m.n() {
        let tmp = m[(a, j)];
        m[(a, j)] = m[(b, j)];
        m[(b, j)] = tmp;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_by_two_closed_form() {
        let a = DenseMatrix::from_rows(&[[2.0, -1.0], [-1.0, 2.0]]).unwrap();
        let inv = invert(&a).unwrap();
        let expected = [[2.0 / 3.0, 1.0 / 3.0], [1.0 / 3.0, 2.0 / 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(inv.inverse[(i, j)], expected[i][j], epsilon = 1e-15);
            }
        }
        assert!(inv.residual < 1e-15);
    }

    #[test]
    fn identity_inverts_to_itself() {
        let inv = invert(&DenseMatrix::identity(5)).unwrap();
        assert_eq!(inv.inverse, DenseMatrix::identity(5));
        assert_eq!(inv.residual, 0.0);
    }

    #[test]
    fn uniform_example_inverse() {
        let a = fixtures::example3();
        let inv = invert(&a).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let expected = if i == j { 2.0 / 11.0 } else { 1.0 / 11.0 };
                assert_abs_diff_eq!(inv.inverse[(i, j)], expected, epsilon = 1e-14);
            }
        }
        assert!(
            a.matmul(&inv.inverse)
                .unwrap()
                .max_abs_deviation_from_identity()
                < 1e-12
        );
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let inv = invert(&a).unwrap();
        assert_eq!(inv.inverse, a);
    }

    #[test]
    fn singular_matrices_are_rejected() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(invert(&a), Err(Error::Singular { column: 2, .. })));
        assert!(matches!(
            invert(&DenseMatrix::zeros(3)),
            Err(Error::Singular { .. })
        ));
    }
}
