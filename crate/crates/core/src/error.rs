use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which end of the parameter range a target fell outside of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeEnd {
    /// The target is not below the value reached as `τ → 0`.
    TauZero,
    /// The target is not above the value reached as `τ → ∞`.
    TauInfinity,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "{what} did not converge: estimate {estimate:e} with error {error:e} after {work} steps"
    )]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        error: f64,
        work: usize,
    },

    #[error("non-finite value {value} at t = {t}")]
    NonFinite { t: f64, value: f64 },

    #[error("target {target:e} out of range ({end:?} limit {limit:e}): {reason}")]
    OutOfRange {
        target: f64,
        end: RangeEnd,
        limit: f64,
        reason: String,
    },

    #[error("admissibility failure: {0}")]
    Admissibility(String),

    #[error("undecidable: {0}")]
    Undecidable(String),

    #[error("point t = {t} lies outside {interval}")]
    Domain { t: f64, interval: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("residual {residual:e} exceeds {tolerance:e} in {what}")]
    Residual {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
