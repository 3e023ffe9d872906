use thiserror::Error;

/// Errors produced by the numerical layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state vector is not normalized (norm = {0})")]
    UnnormalizedState(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("seed projector rejected: members ({0},{1}) and ({2},{3}) coincide")]
    RejectedSeed(usize, usize, usize, usize),

    #[error("rank undefined for a zero-probability outcome")]
    ZeroProbabilityOutcome,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
