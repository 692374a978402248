use thiserror::Error;

/// Errors raised by the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zeta has a pole at s = 1")]
    PoleAt1,

    #[error("absolute tolerance {abs_tol:e} unreachable with at most {max_terms} terms at height {height}")]
    AccuracyUnreachable {
        abs_tol: f64,
        max_terms: usize,
        height: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature tolerance not met: estimate {estimate}, error estimate {error:e}")]
    ToleranceNotMet { estimate: f64, error: f64 },

    #[error("invalid rectangle: {0}")]
    InvalidRectangle(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
