use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("point outside the domain: {0}")]
    OutsideDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("test function is not compactly supported in the domain: {0}")]
    NonCompactSupport(String),
    #[error("set is not compactly contained in the domain: {0}")]
    NotCompactlyContained(String),
    #[error("not a probability element: {0}")]
    NotProbability(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
