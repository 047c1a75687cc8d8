//! Error types shared by the model, statistics, and solver layers.

use thiserror::Error;

/// Horizon (in seconds) beyond which the non-Gaussianity onset solver stops
/// expanding its bracket and reports that decoherence is out of reach.
pub const SOLVER_HORIZON_S: f64 = 1e12;

/// Errors produced by model evaluation and root solving.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated a physical or statistical precondition. The message
    /// names the offending quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// A root solve failed to bracket or converge. The message states which
    /// side of the equation dominates where that is known.
    #[error("solver error: {0}")]
    Solver(String),

    /// The non-Gaussianity onset lies beyond the solver horizon: the
    /// self-energy decay time still exceeds the elapsed time at
    /// [`SOLVER_HORIZON_S`].
    #[error("no decoherence within horizon: onset time exceeds {horizon_s:e} s")]
    NoDecoherenceWithinHorizon {
        /// The horizon that was searched, in seconds.
        horizon_s: f64,
    },
}

impl Error {
    /// Shorthand for a [`Error::Domain`] with a formatted message.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Validates that `value` is finite and strictly positive, naming `field` in
/// the error otherwise.
pub(crate) fn ensure_positive(field: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(format!(
            "{field} must be positive and finite, got {value}"
        )))
    }
}

/// Validates that `value` is finite and non-negative, naming `field` in the
/// error otherwise.
pub(crate) fn ensure_non_negative(field: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(format!(
            "{field} must be non-negative and finite, got {value}"
        )))
    }
}
