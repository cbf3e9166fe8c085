use thiserror::Error;

/// Errors raised by the algebra engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("element is not in the radical: {0}")]
    NotInRadical(String),
    #[error("coefficient not representable in characteristic {characteristic}: {detail}")]
    CharacteristicObstruction { characteristic: u64, detail: String },
    #[error("work cap exceeded: {0}")]
    DegreeBoundExceeded(String),
    #[error("ring too large to enumerate: {size} elements exceeds cap {cap}")]
    CardinalityTooLarge { size: u128, cap: u128 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("word is not triangular: {0}")]
    NotTriangularWord(String),
    #[error("no unit shift found for the lower-left corner")]
    NoUnitShiftFound,
    #[error("determinant is not one: {0}")]
    DeterminantNotOne(String),
    #[error("no unit pivot in column {0}")]
    PivotNotFound(usize),
    #[error("unsupported factor: {0}")]
    UnsupportedFactor(String),
    #[error("row is not unimodular")]
    NotUnimodular,
    #[error("witness identity fails: {0}")]
    WitnessMismatch(String),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("completion unsupported: {0}")]
    CompletionUnsupported(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
