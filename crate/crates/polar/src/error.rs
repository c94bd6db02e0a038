//! Error type shared by the code-construction and decoder APIs.

use thiserror::Error;

/// Errors raised by code construction, encoding, and decoding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarError {
    /// A caller-supplied parameter violates a precondition.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub type Result<T> = std::result::Result<T, PolarError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(PolarError::InvalidParameters(msg.into()))
}
