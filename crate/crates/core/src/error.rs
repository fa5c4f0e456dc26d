use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid arguments: mismatched jets, bad parameters, malformed input.
    #[error("usage error: {0}")]
    Usage(String),
    /// Evaluation at a point where the function is not analytic
    /// (a spectrum point, a branch point, a vanishing divisor).
    #[error("singularity: {0}")]
    Singularity(String),
    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn singular<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Singularity(msg.into()))
}
