use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("degenerate vector: {0}")]
    DegenerateVector(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    Dimension {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("format error{}: {msg}", .row.map(|r| format!(" at row {r}")).unwrap_or_default())]
    Format { msg: String, row: Option<usize> },

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("grouping error: {0}")]
    Grouping(String),

    #[error("enumeration guard exceeded: V = {vocab} > {limit}")]
    Guard { vocab: usize, limit: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format {
            msg: msg.into(),
            row: None,
        }
    }

    pub(crate) fn format_at(row: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            msg: msg.into(),
            row: Some(row),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
