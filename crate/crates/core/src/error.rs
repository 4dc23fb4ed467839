use thiserror::Error;

use crate::plane::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("arguments must be distinct")]
    IdenticalArguments,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a projective plane: {0}")]
    AxiomViolation(Box<ValidationReport>),
    #[error("plane carries no coordinates")]
    NoCoordinates,
    #[error("construction requires even order, got q = {0}")]
    OddOrder(u32),
    #[error("requested {requested} lines in general position, at most {max} available")]
    TooMany { requested: usize, max: usize },
    #[error("bad arity: {0}")]
    BadArity(String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("verification failed for {name}: {check}")]
    VerificationFailed { name: String, check: String },
    #[error("parameter out of range: {0}")]
    BadRange(String),
    #[error("sequence is not a permutation of the line indices")]
    NotAPermutation,
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than internal inconsistency.
    pub fn is_user_error(&self) -> bool {
        !matches!(
            self,
            Error::VerificationFailed { .. } | Error::ConstructionFailed(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
