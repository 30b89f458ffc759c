use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// The intercept sits on an Ostrowski digit boundary; supply formal digits instead.
    #[error("Ostrowski digit b_{index} is undecidable (intercept lies on a digit boundary)")]
    UndecidableDigit { index: usize },

    #[error("Sturmian letter s_{index} could not be decided within {bits} bits")]
    UndecidableLetter { index: usize, bits: u64 },

    #[error("sign could not be decided within {bits} bits")]
    PrecisionExhausted { bits: u64 },

    #[error("word length cap exceeded; last completed index {last_completed}")]
    LengthCapExceeded { last_completed: i64 },

    #[error("contraction left a non-positive element at position {position}")]
    NonPositiveResidual { position: usize },

    #[error("series does not contract: |beta * alpha^theta| >= 1")]
    NotContracting,

    #[error("depth {needed} required but only {available} computed")]
    InsufficientDepth { needed: usize, available: usize },

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Parse(_) => 2,
            Error::UndecidableDigit { .. }
            | Error::UndecidableLetter { .. }
            | Error::PrecisionExhausted { .. } => 3,
            Error::Verification(_) | Error::NonPositiveResidual { .. } => 4,
            _ => 1,
        }
    }
}
