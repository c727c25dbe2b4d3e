use thiserror::Error;

/// Errors raised by the toolkit's library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("root on boundary circle: {0}")]
    Boundary(String),
    #[error("evaluation error at index {index}: {reason}")]
    Evaluation { index: usize, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI envelope.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::Domain(_) => "domain",
            Error::Resource(_) => "resource",
            Error::Boundary(_) => "boundary",
            Error::Evaluation { .. } => "evaluation",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
