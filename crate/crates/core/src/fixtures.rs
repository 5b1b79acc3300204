//! Built-in test matrices.
//!
//! `ex1` is a 10x10 M-matrix that is neither strictly nor weakly chained
//! diagonally dominant (its last row has diagonal 37.9 against an
//! off-diagonal sum of 38). `ex2` is a strictly diagonally dominant 10x10
//! M-matrix whose last row has a slack of only 0.1. `ex3` has diagonal 10
//! and every off-diagonal entry -1; its inverse is doubly stochastic and
//! `tau = 1`.

use crate::matcore::DenseMatrix;

pub const NAMES: [&str; 3] = ["ex1", "ex2", "ex3"];

#[rustfmt::skip]
const EX1: [[f64; 10]; 10] = [
    [27.0, -2.0, -4.0, -1.0, -3.0, -3.0, -4.0, -5.0, -1.0, -3.0],
    [-2.0, 34.0, -13.0, -2.0, -4.0, -2.0, -5.0, 0.0, -3.0, -2.0],
    [-3.0, -5.0, 34.0, -6.0, -4.0, -3.0, -5.0, -2.0, -3.0, -2.0],
    [0.0, -3.0, -4.0, 38.0, -13.0, -4.0, -1.0, -4.0, -3.0, -5.0],
    [-3.0, -3.0, -1.0, -11.0, 41.0, -9.0, -2.0, -3.0, -4.0, -4.0],
    [-3.0, -5.0, -2.0, -3.0, -6.0, 35.0, -1.0, -5.0, -5.0, -4.0],
    [-5.0, -2.0, 0.0, -5.0, 0.0, -7.0, 34.0, -8.0, -1.0, -5.0],
    [-1.0, -4.0, -3.0, -2.0, -5.0, -1.0, -9.0, 32.0, -1.0, -5.0],
    [-4.0, -4.0, -2.0, -4.0, -4.0, -3.0, -2.0, -1.0, 33.0, -8.0],
    [-5.0, -5.0, -4.0, -3.0, -1.0, -2.0, -4.0, -3.0, -11.0, 37.9],
];

#[rustfmt::skip]
const EX2: [[f64; 10]; 10] = [
    [41.0, -12.0, -1.0, -5.0, -3.0, -3.0, -4.0, -4.0, -3.0, -3.0],
    [-9.0, 42.0, -15.0, -2.0, 0.0, -4.0, 0.0, -3.0, -4.0, -4.0],
    [-1.0, -5.0, 43.0, -13.0, -3.0, -3.0, -5.0, -4.0, -4.0, -4.0],
    [-3.0, -5.0, -6.0, 36.0, -9.0, -4.0, -3.0, -1.0, 0.0, -4.0],
    [-4.0, -3.0, -5.0, -2.0, 34.0, -10.0, -2.0, -1.0, -4.0, -2.0],
    [-3.0, -1.0, -4.0, -2.0, -1.0, 37.0, -15.0, -5.0, -2.0, -3.0],
    [-5.0, -2.0, -2.0, -2.0, -4.0, -2.0, 35.0, -8.0, -5.0, -4.0],
    [-5.0, -5.0, -1.0, -4.0, -5.0, -3.0, 0.0, 33.0, -6.0, -3.0],
    [-5.0, -3.0, -4.0, -3.0, -3.0, -2.0, -2.0, -3.0, 37.0, -11.0],
    [-3.0, -5.0, -4.0, -2.0, -5.0, -5.0, -3.0, -3.0, -8.0, 38.1],
];

pub fn example1() -> DenseMatrix {
    DenseMatrix::from_rows(&EX1).expect("fixture is square and finite")
}

pub fn example2() -> DenseMatrix {
    DenseMatrix::from_rows(&EX2).expect("fixture is square and finite")
}

pub fn example3() -> DenseMatrix {
    let mut a = DenseMatrix::filled(10, -1.0);
    for i in 0..10 {
        a[(i, i)] = 10.0;
    }
    a
}

/// Looks up a fixture by name (`ex1`, `ex2`, `ex3`).
pub fn by_name(name: &str) -> Option<DenseMatrix> {
    match name {
        "ex1" => Some(example1()),
        "ex2" => Some(example2()),
        "ex3" => Some(example3()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_rows_carry_the_dominance_slack() {
        let a = example1();
        let off: f64 = a.row(9)[..9].iter().map(|x| x.abs()).sum();
        assert_eq!(off, 38.0);
        assert_eq!(a[(9, 9)], 37.9);
        let b = example2();
        let off: f64 = b.row(9)[..9].iter().map(|x| x.abs()).sum();
        assert_eq!(off, 38.0);
        assert_eq!(b[(9, 9)], 38.1);
    }

    #[test]
    fn lookup() {
        for name in NAMES {
            assert_eq!(by_name(name).unwrap().n(), 10);
        }
        assert!(by_name("ex4").is_none());
    }
}
