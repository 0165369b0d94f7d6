use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("i/o error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("timestamp {0} is not positive")]
    InvalidTimestamp(i64),

    #[error("community `{0}` not present in corpus")]
    UnknownCommunity(String),

    #[error("user is not eligible: {total} top-level comments, {required} required")]
    NotEligible { total: u32, required: u32 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("rank-deficient design; collinear terms: {}", .0.join(", "))]
    RankDeficient(Vec<String>),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("infeasible synthetic config: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
