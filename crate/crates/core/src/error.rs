use thiserror::Error;

/// Source position inside a presentation file, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{pos}: {msg}")]
    Parse { pos: Position, msg: String },

    #[error("{pos}: non-homogeneous relation: term has {found} factors, expected {expected}")]
    NonHomogeneous {
        pos: Position,
        found: usize,
        expected: usize,
    },

    #[error("invalid number {0:?}")]
    InvalidNumber(String),

    #[error("{0} is not a prime below 2^32")]
    InvalidPrime(u64),

    #[error("coefficient {0} is not defined in {1}")]
    CoefficientNotInField(String, String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("ambient mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degree {requested} exceeds the truncation degree {max}")]
    DegreeOverflow { requested: usize, max: usize },

    #[error("window too small: {what} needs max degree at least {required}, got {got}")]
    WindowTooSmall {
        what: String,
        required: usize,
        got: usize,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
