use thiserror::Error;

/// Errors raised by the cohomology engine and its supporting modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("slot {slot} of {alpha} is zero and cannot be lowered")]
    NotLowerable { alpha: String, slot: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("wrong case: {0}")]
    WrongCase(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
