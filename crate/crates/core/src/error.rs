use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("value is not integral: {0}")]
    NotIntegral(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("not supported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn construction<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Construction(msg.into()))
}
