//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's arguments was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An allocation would exceed the configured memory budget.
    #[error("resource error: requires {required_bytes} bytes (cap {cap_bytes})")]
    Resource { required_bytes: u64, cap_bytes: u64 },

    /// A numeric routine failed to reach its target accuracy.
    #[error("numeric error: {message} (achieved tolerance {achieved_tol:.3e})")]
    Numeric { message: String, achieved_tol: f64 },

    /// Too few usable data points for an estimator.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An experiment-level failure (e.g. too many disconnected replicas).
    #[error("experiment failure: {0}")]
    Experiment(String),

    /// Malformed configuration input, with a line/field diagnostic.
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    /// Malformed binary or JSON artifact.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
