//! Crate-wide error type.

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, KsError>;

/// Errors produced by steering, training, serialization, and judge calls.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KsError {
    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Tensor or vector dimensions do not line up.
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    /// A class label is outside the classifier's label range.
    #[error("label {label} out of range for {num_classes} classes")]
    InvalidLabel { label: usize, num_classes: usize },

    /// A steering update produced a non-finite value.
    #[error("non-finite activation at steering step {step}")]
    NumericOverflow { step: usize },

    /// A binary container (KSCL/KSVF/KSAV/KSTM) failed to parse.
    #[error("format error: {0}")]
    Format(String),

    /// An exchange frame failed to parse or validate.
    #[error("protocol error at byte {offset}: {message}")]
    Protocol { offset: usize, message: String },

    /// The judge endpoint could not be reached after retries.
    #[error("judge unavailable: {0}")]
    JudgeUnavailable(String),

    /// The judge replied with something that is not a score.
    #[error("judge reply unparseable: {0}")]
    JudgeParse(String),

    /// Filesystem or stream failure.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for KsError {
    fn from(err: std::io::Error) -> Self {
        KsError::Io(err.to_string())
    }
}
