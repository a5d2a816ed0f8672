use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("unsupported weight {0}")]
    UnsupportedWeight(i64),
    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: String, have: String },
    #[error("f_{m} does not exist for N={n}")]
    DoesNotExist { n: u64, m: u64 },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("ambiguous: {0}")]
    Ambiguous(String),
    #[error("span deficient, enlarge generator pool: rank {rank} < dimension {dim}")]
    SpanDeficient { rank: usize, dim: usize },
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("point lies on a wall: {0}")]
    OnWall(String),
}

impl Error {
    /// Stable machine-readable tag used in structured CLI errors.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotInvertible(_) => "not_invertible",
            Error::InvalidInput(_) => "invalid_input",
            Error::NotFundamental(_) => "not_fundamental",
            Error::ParityMismatch(_) => "parity_mismatch",
            Error::UnsupportedWeight(_) => "unsupported_weight",
            Error::InsufficientPrecision { .. } => "insufficient_precision",
            Error::DoesNotExist { .. } => "does_not_exist",
            Error::NoSolution(_) => "no_solution",
            Error::Ambiguous(_) => "ambiguous",
            Error::SpanDeficient { .. } => "span_deficient",
            Error::NonIntegral(_) => "non_integral",
            Error::Unsupported(_) => "unsupported",
            Error::Verification(_) => "verification_failed",
            Error::OnWall(_) => "on_wall",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
