use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The counter file exists but does not hold a decimal integer.
    #[error("counter file {path} is corrupt: {content:?} is not a decimal integer")]
    Corrupt { path: PathBuf, content: String },

    #[error("storage failure on {path}: {source}")]
    Persistence {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// Scanner input that is not a factory module.
    #[error("malformed module: {0}")]
    Format(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A tape holding something other than binary digits.
    #[error("invalid tape encoding: {0}")]
    Encoding(String),

    /// The on-disk workspace disagrees with itself.
    #[error("workspace integrity: {0}")]
    Integrity(String),

    #[error("invalid input document: {0}")]
    Input(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn persistence(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Persistence {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Corrupt { .. } => "corrupt_counter",
            Error::Persistence { .. } => "persistence",
            Error::Format(_) => "format",
            Error::Domain(_) => "domain",
            Error::Encoding(_) => "encoding",
            Error::Integrity(_) => "integrity",
            Error::Input(_) => "input",
        }
    }
}
