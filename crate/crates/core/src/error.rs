use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cycle notation: {0}")]
    Parse(String),

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("group enumeration exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("unsupported at this size: {0}")]
    Unsupported(String),

    #[error("malformed input file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
