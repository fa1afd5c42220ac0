use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("skew-symmetric matrix has odd dimension {0}")]
    OddDimension(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("form q{index} is degenerate: {reason}")]
    DegenerateForm { index: usize, reason: String },
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("degenerate symbol: {0}")]
    DegenerateSymbol(String),
    #[error("letter index {index} out of range for {len} operators")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("random generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}
