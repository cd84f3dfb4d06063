use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input parameter violates its precondition.
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A point lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("box collapse: relative size {size} is not positive")]
    BoxCollapse { size: f64 },

    #[error("box collapse at step {step}: relative size {size} is not positive")]
    CollapseDuringRun { step: usize, size: f64 },

    /// An iterative method ran out of iterations.
    #[error("{method} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("no sign change of {what} on [{lo}, {hi}]")]
    Bracket {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    /// Trajectory post-processing was given data it cannot analyse.
    #[error("analysis error: {0}")]
    Analysis(String),

    #[error("{0} has no SI scales; build it from a PhysicalInput")]
    NoScales(&'static str),

    #[error("at t = {t}: {source}")]
    AtTemperature { t: f64, source: Box<Error> },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

/// Checks that `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, value, "must be finite and > 0"))
    }
}
