use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit: {what} needs {required} enumerated outcomes, cap is {cap}")]
    ResourceLimit {
        what: String,
        required: u128,
        cap: u64,
    },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("reduction failure: {0}")]
    ReductionFailure(String),

    #[error("prefix search failure: {0}")]
    PrefixSearchFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
