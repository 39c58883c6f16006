use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("sampler runaway: no first passage of level {level} after {steps} steps")]
    Runaway { level: f64, steps: u64 },
    #[error("ladder too short: need at least {needed} points, got {got}")]
    LadderTooShort { needed: usize, got: usize },
    #[error("ladder too deep: no exceedances observed at t = {0}")]
    LadderTooDeep(f64),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
