use alloc::string::String;

/// Errors raised by the simulator core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument or record violated a documented precondition.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    /// A linear-algebra step could not be carried out (singular system, SVD failure).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Malformed compressed-CSI byte stream.
    #[error("wire format: {0}")]
    Format(String),

    #[error("training: {0}")]
    Training(String),

    /// The adaptive policy has no measurements for the requested operating point.
    #[error("no measurements for channel `{tag}` in the bucket around {rho_db} dB")]
    MissingBucket { tag: String, rho_db: f64 },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
