use thiserror::Error;

/// Errors produced by model construction, likelihood evaluation and sampling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("series is empty")]
    EmptySeries,

    #[error("series too short: {len} observations, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("decay rate rho must be positive, got {0}")]
    NonPositiveRho(f64),

    #[error("signal basis vector is numerically zero; the amplitude conditional is degenerate")]
    DegenerateBasis,

    #[error("log-posterior became non-finite at iteration {iter}")]
    NonFiniteLogPosterior { iter: usize },

    #[error("invalid chain configuration: {0}")]
    InvalidConfig(String),

    #[error("no draws to summarize")]
    EmptyDraws,
}

pub type Result<T> = std::result::Result<T, Error>;
