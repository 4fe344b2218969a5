use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library and the command-line harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The point lies outside the support of the target density.
    #[error("support violation: {0}")]
    SupportViolation(String),

    /// The reparameterization is singular at this point (equal intensities).
    #[error("degenerate point: {0}")]
    DegeneratePoint(String),

    #[error("series has zero variance")]
    UndefinedVariance,

    /// Bad command-line or manifest input.
    #[error("usage: {0}")]
    Usage(String),

    #[error("orchestration error: {0}")]
    Orchestration(String),

    #[error("parse error in {path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
