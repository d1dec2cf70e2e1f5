use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("rational kernel needs |y| < 1, got |y| = {0}")]
    PoleInsideDisk(f64),

    #[error("series is not normalized (a_0 must be exactly 1, got {0})")]
    NotNormalized(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("tail estimate failed: {0}")]
    TailEstimate(String),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("spec parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
