use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A form that must be invertible (for `sharp`, orthogonal complements,
    /// the h/k maps) has zero determinant.
    #[error("singular form: {0}")]
    SingularForm(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An input object fails one of its defining identities. `anchor` names
    /// the identity; `detail` carries the failing indices and residuals.
    #[error("validation failed [{anchor}]: {detail}")]
    Validation { anchor: String, detail: String },

    /// A quantity computed two ways disagrees.
    #[error("internal consistency check failed [{anchor}]: {detail}")]
    Consistency { anchor: String, detail: String },

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("unknown zoo entry: {0}")]
    UnknownZoo(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(anchor: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Validation {
            anchor: anchor.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn consistency(anchor: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Consistency {
            anchor: anchor.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by malformed or mismatched input rather than a
    /// failed mathematical check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Io { .. } | Error::DimensionMismatch(_) | Error::UnknownZoo(_)
        )
    }
}
