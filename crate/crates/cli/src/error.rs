use std::path::PathBuf;

/// Errors from dataset ingestion, validation, and report emission.
#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    /// Malformed content with file/row/column context.
    #[error("{path}, row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{path}: incomplete coverage: system {system} has no score on instance {instance} of task {task}")]
    MissingCell {
        path: PathBuf,
        system: String,
        task: String,
        instance: String,
    },

    #[error(transparent)]
    Core(#[from] benchrank_core::Error),
}

impl DataError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DataError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, row: usize, message: impl Into<String>) -> Self {
        DataError::Parse {
            path: path.into(),
            row,
            message: message.into(),
        }
    }
}
