//! Error type shared by the analytic and simulation layers.

use thiserror::Error;

/// Failure modes of the numeric operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series or root finder did not meet its tolerance within the
    /// iteration cap.
    #[error("no convergence within {max_terms} iterations (residual {residual:e})")]
    NoConvergence { max_terms: usize, residual: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
