use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("order {order} exceeds the size cap {cap}")]
    SizeCap { order: u128, cap: u64 },
    #[error("modulus with encoding {0} is not irreducible")]
    NotIrreducible(u64),
    #[error("element encoding {enc} is out of range for a field of order {order}")]
    OutOfRange { enc: u64, order: u64 },
    #[error("operands belong to different fields")]
    CtxMismatch,
    #[error("zero has no inverse")]
    InverseOfZero,
    #[error("power test is undefined for zero")]
    ZeroPowerTest,
    #[error("operation {op} expects {expected} operand(s), got {got}")]
    Arity {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("linear constraints are inconsistent")]
    Inconsistent,
    #[error("pre-semifield has zero divisors")]
    ZeroDivisors,
    #[error("base point must be nonzero")]
    ZeroBasePoint,
    #[error("certificate does not verify: {0}")]
    Certificate(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("k = m/2 is excluded")]
    HalfDegree,
    #[error("parameters are not admissible for classification: {0}")]
    Inadmissible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
