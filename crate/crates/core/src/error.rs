use thiserror::Error;

/// Errors raised by construction, querying and (de)serialization.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("pattern of length {len} exceeds the maximum supported length {max}")]
    PatternTooLong { len: usize, max: usize },

    #[error("duplicate key at build position {0}")]
    DuplicateKey(usize),

    #[error("keys are not sorted (position {0})")]
    Unsorted(usize),

    #[error("inconsistent comparator inside window starting at {0}")]
    InconsistentComparator(usize),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("malformed corpus: {0}")]
    Parse(String),

    #[error("corrupt index: {0}")]
    Corrupt(String),
}

pub type Result<T> = std::result::Result<T, Error>;
