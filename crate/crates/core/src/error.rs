use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unstable moduli space: genus {g} with {n} markings")]
    Unstable { g: u32, n: u32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("polynomiality check failed: {0}")]
    Polynomiality(String),
    #[error("unexpanded marker: {0}")]
    UnexpandedMarker(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
