use thiserror::Error;

/// Errors raised by the engine.
///
/// The CLI maps [`Error::Usage`] and [`Error::Parse`] to exit code 2 and
/// [`Error::Capacity`] to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid packing: {0}")]
    InvalidPacking(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
