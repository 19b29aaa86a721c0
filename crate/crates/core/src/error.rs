use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid motif: {0}")]
    InvalidMotif(String),

    #[error("invalid radius {0}: must be a finite non-negative number")]
    InvalidRadius(f64),

    #[error("motif index {index} out of range for a motif of {size} points")]
    InvalidMotifIndex { index: usize, size: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("radius mismatch: {left} vs {right}")]
    RadiusMismatch { left: f64, right: f64 },

    #[error("empty point set")]
    EmptyInput,

    #[error("size mismatch: {left} vs {right} points")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("neighbour count mismatch: k={left} vs k={right}")]
    NeighborCountMismatch { left: usize, right: usize },

    #[error("neighbour count must be at least 1")]
    InvalidNeighborCount,

    #[error("invalid cell: {0}")]
    InvalidCell(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
