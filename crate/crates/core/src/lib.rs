//! Certified lower bounds for the minimum eigenvalue `tau(A)` of a
//! nonsingular M-matrix.
//!
//! The crate computes a family of monotonically improving lower bounds built
//! from an iteration ladder of entry-ratio sequences, together with the
//! older bounds they refine, and checks them against a reference value
//! `tau(A) = 1 / rho(A^{-1})` obtained by power iteration.
//!
//! ```
//! use mmin_core::{bounds, fixtures, Method};
//!
//! let a = fixtures::example3();
//! let report = bounds::full_report(&a, 3, 1e-12).unwrap();
//! let gamma1 = report.value(Method::GammaT, Some(1)).unwrap();
//! assert!((gamma1 - 1.0).abs() < 1e-9);
//! ```

// `!(x > 0.0)` style guards are meant to catch NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod io;
pub mod matcore;
pub mod sequences;

pub use bounds::{BoundKind, BoundReport, BoundResult, Method};
pub use error::{Error, Result};
pub use matcore::{DenseMatrix, MatrixClass};
pub use sequences::{AuxLadder, BaseQuantities};
