use thiserror::Error;

/// Errors produced by parsing, validation and solving.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text or document.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally well-formed input that violates a model invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A solver parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An argument refers to something outside the model, e.g. a product
    /// not in the product set.
    #[error("domain error: {0}")]
    Domain(String),

    /// A result failed an internal consistency check.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
