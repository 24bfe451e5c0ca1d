use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("invalid linear program: {0}")]
    InvalidLp(String),

    #[error("no perfect matching exists; unmatched vertices {unmatched:?}")]
    NoPerfectMatching { unmatched: Vec<usize> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A construction produced an object that fails its own invariants.
    /// Seeing this means a bug upstream, never bad input.
    #[error("invariant violated in {stage}: {message}")]
    Invariant { stage: &'static str, message: String },

    #[error("value out of range for integer arithmetic: {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invariant(stage: &'static str, message: impl Into<String>) -> Self {
        Error::Invariant { stage, message: message.into() }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
