use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A city or position index outside the valid range.
    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },

    /// A caller broke an operation's precondition (length mismatch, invalid tour, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Input data that parsed but is not a valid problem instance or configuration.
    #[error("validation error: {0}")]
    Validation(String),

    /// The instance is too small for the requested operation.
    #[error("unsupported instance: {0}")]
    Unsupported(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
