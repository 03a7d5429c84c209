use thiserror::Error;

/// Errors produced by the factorization library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid generators: {0}")]
    InvalidGenerators(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("resource limit: {what} needs {required} but the limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
