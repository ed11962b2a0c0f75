use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partitions of different size: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded { what: &'static str, value: u128, cap: u128 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("representation check failed: {0}")]
    Representation(String),

    #[error("eigensolver did not converge after {matvecs} matvecs (best residual {best_residual:e})")]
    NonConvergence { matvecs: usize, best_residual: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no symmetry class matches eigenvalue {0}")]
    Unclassified(f64),

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
