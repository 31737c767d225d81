use crate::group::GroupId;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group mismatch: expected {expected}, found {found}")]
    GroupMismatch { expected: GroupId, found: GroupId },

    #[error("element of {group} needs {expected} coordinates, got {found}")]
    Arity {
        group: GroupId,
        expected: usize,
        found: usize,
    },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("finite subset must be nonempty")]
    EmptySubset,

    #[error("duplicate element in finite subset")]
    DuplicateElement,

    #[error("Følner index {index} out of range (sequence defines {len} sets)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("tempered subsequence search budget exceeded at step {step} after {searched} candidates")]
    BudgetExceeded { step: usize, searched: usize },

    #[error("point does not belong to system {system}")]
    PointMismatch { system: String },

    #[error("measures live on different spaces: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cost matrix: {0}")]
    InvalidCost(String),

    #[error("transport plan: {0}")]
    InvalidPlan(String),

    #[error("brute-force assignment supports n <= {max}, got n = {n}")]
    SizeLimit { n: usize, max: usize },

    #[error("unsupported case: unequal atom counts ({left} vs {right}) in Wasserstein distance")]
    UnequalAtomCounts { left: usize, right: usize },

    #[error("assignment value {assignment} disagrees with Wasserstein value {wasserstein}")]
    SolverInconsistency { assignment: f64, wasserstein: f64 },

    #[error("unknown {what}: {name}")]
    Unknown { what: &'static str, name: String },

    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub(crate) fn check_tolerance(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
