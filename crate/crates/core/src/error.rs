use std::path::PathBuf;

/// Errors produced by ingestion, selection and statistics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid arguments or configuration.
    #[error("usage error: {0}")]
    Usage(String),

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

    /// Cross-check failures: a recomputed value disagrees with a stored one.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// Input is well-formed but unsuitable for the requested analysis.
    #[error("diagnostic: {0}")]
    Diagnostic(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 usage, 2 data or integrity, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Io { .. } | Error::Parse { .. } | Error::Integrity(_) | Error::Diagnostic(_) => 2,
            Error::Internal(_) => 3,
        }
    }
}
