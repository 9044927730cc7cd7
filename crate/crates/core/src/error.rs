use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system size: {0}")]
    Sizing(String),
    #[error("invalid index list {indices:?}: {reason}")]
    Indices { indices: Vec<usize>, reason: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },
    #[error("initial vector is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter { name, reason: reason.into() }
    }

    /// True for errors caused by bad input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
