use thiserror::Error;

/// Errors raised by the expansion engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("key rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("form validation failed: {0}")]
    Validation(String),

    #[error("coefficient unavailable: coset {coset}, exponent {m} is beyond the known order {order}")]
    CoefficientUnavailable {
        coset: usize,
        m: String,
        order: String,
    },

    #[error("grade-0 part of an exponential argument must vanish")]
    NonzeroGradeZero,

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
