//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The shifted matrix `A - sigma*I` is singular to working precision,
    /// which signals that `sigma` coincides with an eigenvalue.
    #[error("shift {sigma} makes the matrix singular to working precision (pivot {pivot:.3e} at column {column})")]
    SingularShift {
        sigma: f64,
        pivot: f64,
        column: usize,
    },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("dense size cap exceeded: dimension {n} > cap {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix market parse error at line {line}: {message}")]
    MatrixMarket { line: usize, message: String },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
