use thiserror::Error;

/// Errors surfaced by the simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("bit width mismatch: expected {expected}, got {actual}")]
    WidthMismatch { expected: u32, actual: u32 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state is not normalized: squared norm deviates by {deviation}")]
    NotNormalized { deviation: f64 },

    #[error("invalid ensemble: {reason}")]
    InvalidEnsemble { reason: String },

    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("cannot condition on outcome {outcome}: probability {probability} is zero")]
    ZeroProbabilityOutcome { outcome: u64, probability: f64 },

    #[error("function table mismatch: {reason}")]
    TableMismatch { reason: String },

    #[error("hidden shift must be nonzero")]
    TrivialShift,

    #[error("invalid instance parameter: {reason}")]
    InvalidInstance { reason: String },

    #[error("promise violated: collected rows have full rank {rank}, leaving no nonzero solution")]
    FullRankSystem { rank: usize },

    #[error("sample count must be positive")]
    EmptySample,

    #[error("formula evaluation failed its normalization gate: sum is {sum}")]
    FormulaNotNormalized { sum: f64 },

    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("invariant breach in {context}: {detail}")]
    InvariantBreach { context: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
