use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("cyclotomic order {0} unsupported (must be 1..=10000)")]
    UnsupportedOrder(usize),
    #[error("order {from} does not divide {to}; cannot rescale")]
    BadRescale { from: usize, to: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow in exact kernel: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid group: {0}")]
    Group(String),
    #[error("invalid twist: {0}")]
    Twist(String),
    #[error("matrix is singular")]
    Singular,
    #[error("algebra audit failed: {0}")]
    Algebra(String),
    #[error("exact linear algebra did not converge after {0} primes")]
    NoConvergence(usize),
    /// A randomized numerical step hit a degenerate draw; another seed should succeed.
    #[error("degenerate random choice (retry with a different seed): {0}")]
    Retryable(String),
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that a different random seed may avoid.
    pub fn is_retryable(&self) -> bool {
        matches!(self, Error::Retryable(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
