use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset contains no streamlines")]
    EmptyDataset,
    #[error("streamline {index} has no points")]
    EmptyStreamline { index: usize },
    #[error("streamline {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },
    #[error("streamline {index} has dimension {found}, expected {expected}")]
    MixedDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("euclidean kernel needs single-point streamlines, got {len} points")]
    NotAPoint { len: usize },
    #[error("cannot select {p} prototypes from {n} objects")]
    TooManyPrototypes { p: usize, n: usize },
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("correlation needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("zero variance in correlation input")]
    ZeroVariance,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
