use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at {start}..{end}: {message}")]
    Parse { message: String, start: usize, end: usize },

    #[error("degenerate representation: {0}")]
    Degenerate(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn parse(message: impl Into<String>, start: usize, end: usize) -> Self {
        Error::Parse { message: message.into(), start, end }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
