use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{0} is not a prime field size")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("target vector is not in the column space")]
    UnreachableTarget,

    #[error("no solution of weight at most {0}")]
    CapExceeded(usize),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("size limit exceeded: n = {n}, limit is {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("scheme precondition failed: {0}")]
    Precondition(String),

    #[error("locality {0} is below 1")]
    LocalityBelowOne(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
