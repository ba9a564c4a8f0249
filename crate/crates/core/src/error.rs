use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field with q^M = p^(e*M) elements exceeds the size bound of {bound}")]
    SizeBoundExceeded { bound: u128 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("value does not belong to this tower ({0})")]
    MixedTowers(&'static str),

    #[error("degree {d} does not divide the ambient degree {m}")]
    NonDivisorDegree { d: usize, m: usize },

    #[error("expected length {expected}, found {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("the zero polynomial is not accepted here")]
    ZeroPolynomial,

    #[error("coefficient of x must be zero")]
    NonzeroLinearTerm,

    #[error("gcd of two zero polynomials is undefined")]
    BothZero,

    #[error("a must be nonzero")]
    ZeroA,

    #[error("expected q-degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("polynomial is not of the block form: {0}")]
    ShapeViolation(String),

    #[error("expected a subspace of dimension {expected}, found {found}")]
    WrongDim { expected: usize, found: usize },

    #[error(
        "ambient field is too small{}; recommended ambient degree M = {recommended_m}",
        found_dim.map(|d| format!(" (kernel dimension {d} found)")).unwrap_or_default()
    )]
    AmbientTooSmall {
        found_dim: Option<usize>,
        recommended_m: u64,
    },

    #[error("bad dimensions: {0}")]
    BadDims(String),

    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
