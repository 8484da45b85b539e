use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library and the `mfc` binary.
///
/// Each variant maps to a distinct process exit code (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("n = {n} exceeds the cap of {cap} points for {what}; raise the cap explicitly to proceed")]
    OverCap { n: usize, cap: usize, what: &'static str },

    #[error("edge list is disconnected: components rooted at {a} and {b} cannot be joined")]
    Disconnected { a: usize, b: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("serialization failed: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Io { .. } => 3,
            Error::Parse { .. } => 4,
            Error::Config(_) => 5,
            Error::Input(_) => 6,
            Error::OverCap { .. } => 7,
            Error::Disconnected { .. } => 8,
            Error::Invariant(_) => 9,
            Error::Serde(_) => 10,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
