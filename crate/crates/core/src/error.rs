//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's inputs was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Parameters make the requested quantity undefined (e.g. division by
    /// a vanishing amplitude combination).
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    /// A curve crossed zero from positive to negative where a depression
    /// to potentiation crossing was expected.
    #[error("unexpected curve orientation: {0}")]
    UnexpectedOrientation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
