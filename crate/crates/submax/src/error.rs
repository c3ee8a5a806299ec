use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SubmaxError {
    #[error(transparent)]
    Core(#[from] submax_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, SubmaxError>;

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> SubmaxError {
    let path = path.into();
    move |source| SubmaxError::Io { path, source }
}
