use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("polynomial is not q-palindromic for q = {q}")]
    NotPalindromic { q: String },

    #[error("polynomial has a real root at +-sqrt(q) (divisible by x^2 - q)")]
    RealRoots,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not a symplectic similitude: {0}")]
    NotSimilitude(String),

    #[error("vector is not primitive (gcd of entries is {0})")]
    NotPrimitive(String),

    #[error("desk-scale guard exceeded: {what} = {got} > {limit}")]
    GuardExceeded { what: &'static str, limit: u64, got: u64 },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("element is not purely imaginary in Q[F]")]
    NotImaginary,

    #[error("module is not ordinary: {0}")]
    NotOrdinary(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
