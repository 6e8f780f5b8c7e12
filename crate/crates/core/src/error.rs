use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the kernel can report. Each variant names the precondition
/// that was violated; the CLI prints the `Display` form as a one-line
/// diagnostic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid truncation order {0}: must be at least 1")]
    InvalidTruncation(i64),

    #[error("ambient dimension {dim} exceeds the supported limit of {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("ideal generator is not parity-homogeneous")]
    NotHomogeneous,

    #[error("ideal generator has a nonzero body, the ideal would contain a unit")]
    UnitInIdeal,

    #[error("element is not invertible: {0}")]
    NotInvertible(&'static str),

    #[error("incompatible generator images: {0}")]
    IncompatibleImages(String),

    #[error("parity violation: {0}")]
    Parity(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("analytic function {0} applied to an operand that is not even")]
    AnalyticOnOdd(String),

    #[error("coordinate {0} out of range")]
    CoordinateOutOfRange(String),

    #[error("point outside region: {0}")]
    OutsideRegion(String),

    #[error("{func} is undefined at body value {at}")]
    FunctionDomain { func: String, at: String },

    #[error("{0} requires floating-point scalars")]
    NeedsFloat(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("algebra height {height} exceeds series truncation order {order}")]
    HeightExceedsTruncation { height: usize, order: usize },

    #[error("algebras are not presented over a common ambient: {0}")]
    MismatchedAmbients(String),

    #[error("second algebra must be purely even (no odd generators)")]
    NotPurelyEven,

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unresolved reference: {0}")]
    Unresolved(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
