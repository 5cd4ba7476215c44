use thiserror::Error;

/// Errors raised by the exact and numeric pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("polynomial has odd degree {0}; an even degree 2k is required")]
    OddDegree(usize),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix polynomial has a nonzero constant part")]
    NotLinear,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("linear system is infeasible")]
    Infeasible,

    #[error("free dimension {free_dim} exceeds budget {budget}")]
    BudgetExceeded { free_dim: usize, budget: usize },

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("certificate rejected: {0}")]
    Rejected(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
