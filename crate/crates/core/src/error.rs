use thiserror::Error;

/// Errors shared by every engine. Each variant maps onto a stable code
/// string used by the HTTP layer and the CLI exit status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DpwError {
    #[error("{message}")]
    Validation {
        message: String,
        details: Vec<String>,
    },
    #[error("{kind} '{id}' not found")]
    NotFound { kind: &'static str, id: String },
    #[error("conflict: {0}")]
    Conflict(String),
    #[error("authentication failed: {0}")]
    Unauthenticated(String),
    #[error("rating undefined: {0}")]
    RatingUndefined(String),
    #[error("no emission data for subject {0}")]
    NoEmissionData(String),
    #[error("undefined allocation: {0}")]
    UndefinedAllocation(String),
    #[error("insufficient history: {0}")]
    InsufficientHistory(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl DpwError {
    pub fn validation(message: impl Into<String>) -> Self {
        DpwError::Validation {
            message: message.into(),
            details: Vec::new(),
        }
    }

    pub fn validation_with(message: impl Into<String>, details: Vec<String>) -> Self {
        DpwError::Validation {
            message: message.into(),
            details,
        }
    }

    pub fn not_found(kind: &'static str, id: impl Into<String>) -> Self {
        DpwError::NotFound {
            kind,
            id: id.into(),
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            DpwError::Validation { .. } => "VALIDATION_ERROR",
            DpwError::NotFound { .. } => "NOT_FOUND",
            DpwError::Conflict(_) => "CONFLICT",
            DpwError::Unauthenticated(_) => "UNAUTHENTICATED",
            DpwError::RatingUndefined(_) => "RATING_UNDEFINED",
            DpwError::NoEmissionData(_) => "NO_EMISSION_DATA",
            DpwError::UndefinedAllocation(_) => "UNDEFINED_ALLOCATION",
            DpwError::InsufficientHistory(_) => "INSUFFICIENT_HISTORY",
            DpwError::Parse(_) => "PARSE_ERROR",
            DpwError::Io(_) => "IO_ERROR",
        }
    }

    pub fn details(&self) -> &[String] {
        match self {
            DpwError::Validation { details, .. } => details,
            _ => &[],
        }
    }
}

impl From<std::io::Error> for DpwError {
    fn from(err: std::io::Error) -> Self {
        DpwError::Io(err.to_string())
    }
}

impl From<serde_json::Error> for DpwError {
    fn from(err: serde_json::Error) -> Self {
        DpwError::Parse(err.to_string())
    }
}

impl From<csv::Error> for DpwError {
    fn from(err: csv::Error) -> Self {
        DpwError::Parse(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, DpwError>;
