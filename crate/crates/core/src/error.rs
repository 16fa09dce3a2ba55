//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, FracError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("parse error at byte {offset}: unknown identifier `{name}`")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("domain error: {function} is undefined at {argument}")]
    Domain { function: String, argument: f64 },

    #[error("gamma function has a pole at {0}")]
    GammaPole(f64),

    #[error("gamma function overflows at {0}")]
    GammaOverflow(f64),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: String, iterations: usize },

    #[error("cannot differentiate: {0}")]
    NotDifferentiable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("value {value} is outside the range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("non-finite integrand sample at abscissa {abscissa}")]
    NonFiniteSample { abscissa: f64 },

    #[error("difference step underflows at distance {distance} from the base point")]
    StepUnderflow { distance: f64 },

    #[error("endpoint extrapolation failed: {0}")]
    Extrapolation(String),

    #[error("unknown operator preset `{0}`")]
    UnknownPreset(String),

    #[error("preset `{preset}` requires parameter `{param}`")]
    MissingParameter { preset: String, param: String },

    #[error("2 cos(pi alpha / 2) vanishes at alpha = {0}")]
    CosineZero(f64),
}

impl FracError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        FracError::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(function: &str, argument: f64) -> Self {
        FracError::Domain {
            function: function.to_string(),
            argument,
        }
    }
}
