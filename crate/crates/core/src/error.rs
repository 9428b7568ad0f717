use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("window size {window} exceeds horizon {horizon}")]
    WindowTooLarge { window: u64, horizon: u64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("weight index {index} outside the realized range [{lo}, {hi}]")]
    WeightRange { index: i64, lo: i64, hi: i64 },

    #[error("generator `{0}` has no finite bound; pass an explicit horizon")]
    Unbounded(String),

    #[error("zero weight at index {0}")]
    ZeroWeight(i64),

    #[error("spec parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("pullback supports collide at indices {0:?}")]
    SupportCollision(Vec<i64>),

    #[error("non-finite coefficient at index {0}")]
    NonFinite(i64),

    #[error("resource guard: {0}")]
    Resource(String),

    #[error("report kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: String, got: String },

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
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::OutOfRange(msg.into())
    }

    /// Process exit status: 3 for the resource guard, 2 for everything a
    /// caller can fix in its configuration or inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            _ => 2,
        }
    }
}
