use thiserror::Error;

/// Errors raised by the numerical routines and the matrix readers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (shape, sign, zero diagonal, bad parameter).
    #[error("invalid input: {0}")]
    Input(String),

    /// A matrix document could not be parsed.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// Row reduction met a pivot below the singularity threshold.
    #[error("matrix is numerically singular (pivot {pivot:.3e} in column {column})")]
    Singular { column: usize, pivot: f64 },

    /// Power iteration did not settle within the iteration budget.
    #[error(
        "power iteration did not converge after {iterations} iterations \
         (last estimate {estimate}, residual {residual:.3e})"
    )]
    NoConvergence {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },

    /// The operation needs a nonsingular M-matrix.
    #[error("matrix is not a nonsingular M-matrix")]
    NotMMatrix,
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for failures of the numerics (singularity, non-convergence) as
    /// opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular { .. } | Error::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
