use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NcmsError {
    #[error("invalid letter {0}")]
    InvalidLetter(String),
    #[error("alphabet mismatch: ({0},{1}) vs ({2},{3})")]
    AlphabetMismatch(usize, usize, usize, usize),
    #[error("series is not invertible: constant term is {0}")]
    NotInvertible(String),
    #[error("invalid level {0}")]
    InvalidLevel(i64),
    #[error("matrix {0:?} does not have determinant 1")]
    NotUnimodular([i64; 4]),
    #[error("matrix {0:?} is not in Gamma0({1})")]
    NotInGroup([i64; 4], u32),
    #[error("unsupported cusp: {0}")]
    UnsupportedCusp(String),
    #[error("cannot classify +-I")]
    ScalarMatrix,
    #[error("unknown cusp form label {0:?}")]
    UnknownForm(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point is not in the upper half plane (Im = {0})")]
    NotInUpperHalfPlane(f64),
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("invalid frequency {0}: frequencies must be positive")]
    InvalidFrequency(i64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cost guard: {0}")]
    CostGuard(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, NcmsError>;

impl From<std::io::Error> for NcmsError {
    fn from(e: std::io::Error) -> Self {
        NcmsError::Io(e.to_string())
    }
}
