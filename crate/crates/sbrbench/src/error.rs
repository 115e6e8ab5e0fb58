use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed row: {message}")]
    MalformedRow {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("unknown dataset format `{0}` (expected rsc15, digi or retail)")]
    UnknownFormat(String),

    #[error("empty input file: {0}")]
    EmptyInput(PathBuf),

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("invalid model configuration: {0}")]
    InvalidModelConfig(String),

    #[error("corrupt ranking: duplicate item in recommendation list")]
    DuplicateRecommendation,

    #[error("model produced a non-finite score for item `{item}`")]
    NonFiniteScore { item: String },

    #[error("tuning failed: {0}")]
    TuningFailed(String),

    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 0 success, 2 input error, 3 tuning
    /// failure, 4 missing artifact, 5 bad arguments.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TuningFailed(_) => 3,
            Error::MissingArtifact(_) => 4,
            Error::InvalidArguments(_) => 5,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
