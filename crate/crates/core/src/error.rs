use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter is outside the domain of the operation.
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    /// The operation does not support the given set representation.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two certified enclosures could not be separated at the finest precision.
    #[error("ambiguous comparison: {0}")]
    Ambiguous(String),

    /// An explicit `h` fails the hypothesis of the functional inequality.
    #[error("h is not admissible: {0}")]
    NotAdmissible(String),

    #[error("parse error at {path}: {reason}")]
    Parse { path: String, reason: String },
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn parse(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
