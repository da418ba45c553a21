use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Numerical routines that can salvage a value
/// carry it in the error so callers may degrade gracefully.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("frequencies must be strictly increasing (violated at index {index})")]
    NonMonotoneFrequency { index: usize },

    #[error("frequencies must be non-negative (found {value} at index {index})")]
    NegativeFrequency { index: usize, value: f64 },

    #[error("cutoff x = {x} needs {required} terms, exceeding the budget of {budget}")]
    TermBudgetExceeded { x: f64, required: u64, budget: u64 },

    #[error("quadrature failed to meet tolerance: err_est {err_est:.3e} on value {value}")]
    QuadratureFailed { value: Complex64, err_est: f64 },

    #[error("improper integral needs a tail decay exponent but none was supplied")]
    TailHintMissing,

    #[error("no reference rule available for the requested comparison")]
    MissingReference,

    #[error("target has no evaluation rule off the boundary")]
    NoEvalRule,

    #[error("target has no boundary rule and none could be derived")]
    NoBoundaryRule,

    #[error("extrapolation toward the boundary diverged (last delta {last_delta:.3e})")]
    ExtrapolationDiverged { last_delta: f64 },

    #[error("evaluation point {s} is within {guard:.1e} of the pole")]
    NearPole { s: Complex64, guard: f64 },

    #[error("alternating-series denominator 1 - 2^(1-s) vanishes near {s}")]
    NearDenominatorZero { s: Complex64 },

    #[error("domain error: {message}")]
    Domain { message: String },

    #[error("unknown target {name:?}")]
    UnknownTarget { name: String },

    #[error("config error: {message}")]
    Config { message: String },

    #[error("io error: {message}")]
    Io { message: String },
}

impl Error {
    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain { message: message.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io { message: e.to_string() }
    }
}
