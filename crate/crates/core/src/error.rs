use thiserror::Error;

/// Errors raised by evaluation, verification and discovery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("divergent: {0}")]
    Divergent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("accuracy failure: {0}")]
    Accuracy(String),
    #[error("cancelled: {0}")]
    Cancelled(String),
    #[error("singular system: null-space dimension {nullity}")]
    Singular { nullity: usize },
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
