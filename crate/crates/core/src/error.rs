use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration cap exceeded: {needed} subsets needed, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("sampler gave up after {attempts} attempts; failures by condition: {failures}")]
    Exhausted { attempts: u32, failures: String },
    #[error("parameter regime: {0}")]
    Regime(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
