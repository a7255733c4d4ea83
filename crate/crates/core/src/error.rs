use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the model, the solvers and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration or sweep specification violates its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An iterative routine exhausted its iteration budget.
    #[error("{routine} did not converge within {iterations} iterations")]
    Convergence { routine: &'static str, iterations: usize },

    /// The rows handed to an output routine cannot produce the request.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
