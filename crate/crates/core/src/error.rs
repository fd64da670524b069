use thiserror::Error;

pub type Result<T, E = QarchError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QarchError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size limit exceeded: {what} is {actual}, maximum is {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("graph generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("candidate {index} failed: {message}")]
    CandidateFailed { index: usize, message: String },
}

impl QarchError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        QarchError::InvalidArgument(msg.into())
    }

    /// Stable short name of the error class, used for machine-readable reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            QarchError::InvalidArgument(_) => "invalid-argument",
            QarchError::SizeLimit { .. } => "size-limit",
            QarchError::GenerationFailed { .. } => "generation-failed",
            QarchError::CandidateFailed { .. } => "candidate-failed",
        }
    }
}
