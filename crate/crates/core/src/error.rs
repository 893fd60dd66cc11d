use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("D must be a positive integer, got {0}")]
    NonPositiveD(i64),

    #[error("D = {0} is not squarefree")]
    NotSquarefree(u64),

    #[error("operands belong to different rings (D = {left} and D = {right})")]
    RingMismatch { left: u64, right: u64 },

    #[error("cannot parse element {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("half-coordinates ({u}, {v}) do not describe an algebraic integer for D = {d}")]
    Parity { u: String, v: String, d: u64 },

    #[error("malformed tuple: {0}")]
    Structural(String),

    #[error("missing square witness: {0}")]
    MissingWitness(String),

    #[error("division by zero: {0}")]
    ZeroDivisor(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unsupported shift: {0}")]
    UnsupportedShift(String),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("worker failed: {0}")]
    Worker(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
