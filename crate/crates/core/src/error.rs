use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("phase integral diverges: coefficient of the leading power must be positive, got {0}")]
    Divergent(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point (eta = {eta}, theta = {theta}) lies outside the cached step solution")]
    OutOfDomain { eta: f64, theta: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("nonlinear solve failed at step {step} (t = {time}): residual {residual:e}")]
    NonConvergence {
        step: usize,
        time: f64,
        residual: f64,
    },

    #[error("degenerate region: denominator sup {0:e} is below 1e-300")]
    DegenerateRegion(f64),

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
