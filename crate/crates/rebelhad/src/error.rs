//! Crate-wide error type. Variants map onto the CLI exit codes: usage errors
//! are handled by the argument parser, data/format problems are exit code 2,
//! numerical failures exit code 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed file contents (bad magic, truncated payload, bad header).
    #[error("format error: {0}")]
    Format(String),

    /// Tensor/cube dimension or shape contract violation.
    #[error("shape error: {0}")]
    Shape(String),

    /// Invalid synthetic scene specification.
    #[error("scene spec error: {0}")]
    Scene(String),

    /// Model file or architecture mismatch.
    #[error("model error: {0}")]
    Model(String),

    /// Non-finite values, failed factorizations, failed gradient checks.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Invalid argument combinations detected past CLI parsing.
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) => 1,
            Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}
