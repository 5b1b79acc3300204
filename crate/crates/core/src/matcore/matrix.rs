use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Square real matrix stored row-major.
///
/// Every constructor checks that the order is at least one and that all
/// entries are finite, so downstream code never sees NaN or infinities.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("matrix order must be at least 1"));
        }
        if data.len() != n * n {
            return Err(Error::input(format!(
                "order {n} needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::input(format!(
                "entry ({}, {}) is not finite",
                pos / n + 1,
                pos % n + 1
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::input(format!(
                    "matrix is not square: row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix order must be at least 1");
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn filled(n: usize, value: f64) -> Self {
        assert!(n > 0 && value.is_finite());
        Self {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Self::new(n, data)
    }

    /// Order of the matrix.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for row in self.rows() {
            for (s, x) in sums.iter_mut().zip(row) {
                *s += x;
            }
        }
        sums
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        self.rows()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise deviation from the identity.
    pub fn max_abs_deviation_from_identity(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self[(i, j)] - target).abs());
            }
        }
        worst
    }

    pub(crate) fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::input(format!(
                "order mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{})", self.n, self.n)?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}
