use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SoncError {
    #[error("ambient dimension {0} exceeds the supported maximum of {1}")]
    AmbientDimTooLarge(usize, usize),
    #[error("configuration too large: {0}")]
    TooLarge(String),
    #[error("invalid support set: {0}")]
    InvalidSupport(String),
    #[error("circuit is not simplicial")]
    NotSimplicial,
    #[error("point {0} is not a relative interior point of the Newton polytope")]
    NotInteriorPoint(usize),
    #[error("negative scale")]
    NegativeScale,
    #[error("zero scale has no singular locus")]
    ZeroScale,
    #[error("toric evaluation needs integral exponents (point {0})")]
    NonIntegralExponent(usize),
    #[error("toric point must have positive coordinates of length {0}")]
    InvalidToricPoint(usize),
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("circuit {0:?} lies in no cell of the subdivision")]
    CircuitNotInCell(Vec<usize>),
    #[error("gluing relation violated between cells {cells:?} along {u:?}")]
    RelationViolated { cells: (usize, usize), u: Vec<i64> },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid stratum label: {0}")]
    InvalidLabel(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SoncError>;
