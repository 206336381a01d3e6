use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("values from different quadratic fields Q(sqrt {0}) and Q(sqrt {1})")]
    MixedField(u64, u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("zero lattice vector")]
    ZeroVector,
    #[error("lattice vector ({0}, {1}) is not primitive")]
    NotPrimitive(i64, i64),
    #[error("segment direction is not a multiple of a lattice vector")]
    IrrationalDirection,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("polygon is not Delzant at vertex {0}")]
    NotDelzant(usize),
    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("point lies outside the polygon")]
    OutsidePolygon,
    #[error("level set at h = {0} is degenerate")]
    DegenerateLevel(String),
    #[error("point is not on the level set h = {0}")]
    NotOnLevel(String),
    #[error("diagram move rejected: {0}")]
    Move(String),
    #[error("construction check failed at {point}: {detail}")]
    Verification { point: String, detail: String },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
