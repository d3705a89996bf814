use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("insufficient history: {0}")]
    InsufficientHistory(String),

    #[error("frame index {requested} is outside the buffered window {oldest}..={newest}")]
    OutOfWindow {
        requested: isize,
        oldest: usize,
        newest: usize,
    },

    #[error("{}: format error at byte {offset}: {message}", path.display())]
    Format {
        path: PathBuf,
        offset: u64,
        message: String,
    },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn invalid_param(msg: impl Into<String>) -> Self {
        Error::InvalidParam(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Machine-readable code used in `ERROR <code>:` diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "E_INPUT",
            Error::InvalidParam(_) => "E_PARAM",
            Error::InsufficientHistory(_) | Error::OutOfWindow { .. } => "E_HISTORY",
            Error::Format { .. } => "E_FORMAT",
            Error::Config { .. } => "E_CONFIG",
            Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => "E_INPUT",
            Error::Io { .. } => "E_IO",
        }
    }
}
