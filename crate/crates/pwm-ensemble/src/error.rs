use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("abstentions are not allowed on the synchronous path")]
    AbstentionNotAllowed,

    #[error("a prediction vector for slot {0} is already pending")]
    DuplicatePending(u64),

    #[error("no pending prediction vector for slot {0}")]
    MissingPending(u64),

    #[error(
        "enumeration budget exceeded: {candidates} candidate weight vectors \
         (limit {limit}); lower weight_cap or the number of learners"
    )]
    BudgetExceeded { candidates: u128, limit: u128 },

    #[error("bound not applicable: {0}")]
    NotApplicable(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unsupported format version {found} (supported: {supported})")]
    Version { found: u32, supported: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
