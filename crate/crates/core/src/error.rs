use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the engine.
///
/// [`Error::Violation`] is special: it is raised when a verified hypothesis
/// is followed by a failed conclusion, or when cross-checked computations of
/// equivalent conditions disagree. It always indicates a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid ring element {value} for {ring}")]
    InvalidElement { ring: String, value: String },
    #[error("prime {prime} is not in the spectrum of {ring}")]
    InadmissiblePrime { ring: String, prime: String },
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{op} is not supported over {ring}")]
    UnsupportedRing { op: &'static str, ring: String },
    #[error("invalid module map: {0}")]
    InvalidMap(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("term in degree {0} is not free")]
    NonFreeTerm(i64),
    #[error("depth {depth} is insufficient for degree {degree}")]
    DepthInsufficient { degree: usize, depth: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("tower flag violated: {0}")]
    FlagViolation(String),
    #[error("unknown gallery entry: {0}")]
    UnknownGallery(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("VIOLATION: {0}")]
    Violation(String),
}

impl Error {
    /// True for equivalence or conclusion violations (CLI exit code 3).
    pub fn is_fatal(&self) -> bool {
        matches!(self, Error::Violation(_))
    }
}
