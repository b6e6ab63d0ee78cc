//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum QprError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("no threshold: {0}")]
    NoThreshold(String),
    #[error("outside span: {0}")]
    OutsideSpan(String),
    #[error("duplicate bases: {0}")]
    DuplicateBases(String),
}

pub type Result<T> = std::result::Result<T, QprError>;
