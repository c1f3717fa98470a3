use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("letter {letter} out of range for n = {n}")]
    LetterOutOfRange { letter: usize, n: usize },

    #[error("truncation dimension {dim} exceeds cap {cap}")]
    CapExceeded { dim: u128, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sequence not submultiplicative: a[{k}+{m}] = {lhs} > a[{k}]*a[{m}] = {rhs}")]
    NotSubmultiplicative {
        k: usize,
        m: usize,
        lhs: f64,
        rhs: f64,
    },

    #[error("invalid zero pattern: {0}")]
    InvalidZeroPattern(String),

    #[error("weights not defined beyond level {cap} (requested {requested})")]
    BeyondLevelCap { cap: usize, requested: usize },

    #[error("zero patterns differ at word {0}")]
    ZeroPatternMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("divergence evidence: {0}")]
    Divergent(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LetterOutOfRange { .. } => "letter_out_of_range",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NotSubmultiplicative { .. } => "not_submultiplicative",
            Error::InvalidZeroPattern(_) => "invalid_zero_pattern",
            Error::BeyondLevelCap { .. } => "beyond_level_cap",
            Error::ZeroPatternMismatch(_) => "zero_pattern_mismatch",
            Error::Precondition(_) => "precondition",
            Error::Divergent(_) => "divergent",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Parse(_) => "parse",
        }
    }
}
