use thiserror::Error;

/// Errors raised while building or applying the discrete operator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge within {limit} terms")]
    Divergence { what: &'static str, limit: usize },

    #[error("quadrature for {what} did not reach tolerance {tol:e}")]
    Tolerance { what: String, tol: f64 },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("parameter mismatch: {0}")]
    Mismatch(String),

    #[error("dense assembly is capped at {cap} unknowns, requested {requested}")]
    SizeCap { cap: usize, requested: usize },

    #[error("iterative solver stopped after {iterations} iterations with relative residual {residual:e}")]
    IterationCap { iterations: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
