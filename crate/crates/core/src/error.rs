use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid generator letter {0:?}")]
    InvalidLetter(char),
    #[error("invalid omega sequence: {0}")]
    InvalidOmega(String),
    #[error("invalid ray: {0}")]
    InvalidRay(String),
    #[error("elements live over different omega sequences")]
    OmegaMismatch,
    #[error("tuple arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid finite group table: {0}")]
    InvalidGroupTable(String),
    #[error("linear system is singular at row {0}")]
    Singular(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
