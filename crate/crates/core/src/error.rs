use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid polynomial: {0}")]
    InvalidPoly(String),
    #[error("cannot factor: {0}")]
    Factorization(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not similar to its inverse: invariant factor {0} is not a palindromial")]
    NotSimilarToInverse(String),
    #[error("not bireflectional: {0}")]
    NotBireflectional(String),
    #[error("search budget exhausted while {what} (seed {seed})")]
    BudgetExhausted { what: String, seed: u64 },
    #[error("group enumeration exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
