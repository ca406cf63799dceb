use thiserror::Error;

use crate::classify::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not differentiable at x = {x}: {reason}")]
    NonDifferentiable { x: f64, reason: String },

    #[error("quadrature did not converge after {evaluations} evaluations (error estimate {err_est:e})")]
    NoConvergence { evaluations: usize, err_est: f64 },

    #[error("convexity hypothesis falsified: {0}")]
    HypothesisFalsified(Witness),

    #[error("panel limit of {limit} exceeded")]
    PanelLimit { limit: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
