use thiserror::Error;

/// Errors raised by the analytics, solvers, and the Monte Carlo oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CipcError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow evaluating {0}")]
    Overflow(String),

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("quadrature tolerance not met: estimate {estimate:e}, error bound {error:e}")]
    Tolerance { estimate: f64, error: f64 },

    #[error("no sign change of the target on [{lo:e}, {hi:e}] after widening")]
    BracketNotFound { lo: f64, hi: f64 },

    #[error("no received-power target on the search grid satisfies the covertness constraint")]
    EmptyFeasibleSet,
}

impl CipcError {
    /// True for errors that come from bad inputs rather than from numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(self, CipcError::InvalidParameter(_))
    }
}

pub type Result<T> = std::result::Result<T, CipcError>;
