use thiserror::Error;

/// Errors raised by the numeric pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{op} is not defined for walk {walk}")]
    UnsupportedWalk { op: &'static str, walk: String },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("evaluation order n={0} must be a positive even integer not exceeding 16")]
    InvalidOrder(u32),

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("root isolation failed: {0}")]
    Roots(String),

    #[error("simulation failed: {0}")]
    Simulation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
