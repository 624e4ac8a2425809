use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Input` and `Domain` indicate bad caller data; `Indeterminate` means an
/// interval computation could not separate an inequality below the precision
/// ceiling; `Internal` flags a broken invariant that valid inputs can never
/// trigger.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn indeterminate(msg: impl Into<String>) -> Self {
        Error::Indeterminate(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
