use thiserror::Error;

/// Errors raised by the model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("level index {index} outside 1..={max}")]
    LevelOutOfRange { index: usize, max: usize },

    #[error("energy offset {delta_e} lies outside the coupling band ±{v0}; particle cannot join the drain current")]
    OutOfBand { delta_e: f64, v0: f64 },

    #[error("no stable operating point: 1 + g_m R_I = {loop_gain} is not positive")]
    UnstableBias { loop_gain: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last relative step {last_step:e}, damping {damping})")]
    NoConvergence {
        iterations: usize,
        last_step: f64,
        damping: f64,
    },

    #[error("self-consistency check failed: closed form {closed_form} vs fixed point {fixed_point}")]
    Inconsistent { closed_form: f64, fixed_point: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Rejects non-finite or non-positive values.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and >= 0, got {value}")))
    }
}
