use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library.
///
/// Variants fall into four families which the CLI maps onto exit codes:
/// malformed input, a verdict that failed with a witness, an exhausted
/// enumeration budget, and refusals where a construction's hypothesis does
/// not hold.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("relation is not balanced, convolution is not associative: {0}")]
    NotBalanced(String),

    #[error("elements belong to different rings: {0}")]
    RingMismatch(String),

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("grading violates component closure: {0}")]
    ClosureViolation(String),

    #[error("compression condition {condition} fails: {detail}")]
    NotACompression { condition: u8, detail: String },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("no result: {0}")]
    NotFound(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn refused(msg: impl Into<String>) -> Self {
        Error::Refused(msg.into())
    }

    /// True for errors that carry a failed verdict (with witness) rather than
    /// an unusable input.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            Error::NotBalanced(_)
                | Error::NotAHomomorphism(_)
                | Error::ClosureViolation(_)
                | Error::NotACompression { .. }
                | Error::NotFound(_)
        )
    }
}
