use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the optimizers, benchmark lookup and experiment I/O.
#[derive(Debug, Error)]
pub enum StaError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite coordinate {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    /// Rotation is undefined at the origin.
    #[error("degenerate state: rotation is undefined at the zero vector")]
    DegenerateState,

    /// Translation needs two distinct points to define a direction.
    #[error("degenerate direction: current and previous states coincide")]
    DegenerateDirection,

    #[error("empty candidate set")]
    EmptyCandidates,

    #[error("unknown benchmark `{name}` (valid: {valid})")]
    UnknownBenchmark { name: String, valid: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unsupported output format `{0}` (expected csv or json)")]
    UnsupportedFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = StaError> = std::result::Result<T, E>;
