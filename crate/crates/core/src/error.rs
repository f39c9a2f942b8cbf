use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the model operations and the reporting layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    /// An argument lies outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// The inputs describe no admissible economy (e.g. mean below median).
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// The quantity exists only in a degenerate limit.
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// The optimum runs off to the search ceiling.
    #[error("unbounded: {0}")]
    Unbounded(String),
    /// A malformed row or field in an input file.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("i/o error on {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("usage: {0}")]
    Usage(String),
}

impl ModelError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        ModelError::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        ModelError::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
