use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map one-to-one onto the failure classes the CLI reports, so a
/// caller can decide on an exit status without string matching.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("integral diverged on {0}")]
    Diverged(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("non-cancellation violated: {0}")]
    NonCancellation(String),

    #[error("size limit exceeded: {what} is {actual}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn mismatch<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::SpaceMismatch(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::UnsupportedCombination(msg.into()))
}
