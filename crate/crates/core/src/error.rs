use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate regime: the bound denominator is zero")]
    DegenerateRegime,
    #[error("unachievable overlap: |S1 ∩ S2| = {intersection} with k = {k}, p = {p}")]
    UnachievableOverlap { intersection: usize, k: usize, p: usize },
    #[error("detection model needs sigma > 0")]
    ZeroNoise,
    #[error("response vector is identically zero")]
    ZeroResponse,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("spectral initialization needs n1 != n2")]
    BalancedProportions,
    #[error("symmetric eigensolver failed to converge")]
    EigenFailure,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("support estimate is empty")]
    SupportEmpty,
    #[error("unsupported value set {0:?}; only {{-1,+1}} and {{+1}} are supported")]
    UnsupportedValueSet(Vec<f64>),
    #[error("degree {degree} exceeds configured limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("value exceeds the floating-point range: {0}")]
    Overflow(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("permutation record does not match estimate length {got} (expected {expected})")]
    RecordMismatch { expected: usize, got: usize },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
