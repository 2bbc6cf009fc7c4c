use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by every solution route in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: &'static str, reason: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("state diverged at step {step} (|state| = {magnitude:e})")]
    Divergence { step: usize, magnitude: f64 },

    #[error("sample {sample}: {source}")]
    Sample {
        sample: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("step size too coarse: half-step estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Accuracy { estimate: f64, tolerance: f64 },

    #[error("pole encountered at continued-fraction level {level}")]
    Pole { level: usize },

    #[error("Laplace inversion did not converge at t = {t}: error estimate {estimate:e}")]
    Inversion { t: f64, estimate: f64 },

    #[error("outside the formula's domain: {0}")]
    Domain(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("configuration error at `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        field,
        reason: reason.into(),
    }
}

pub(crate) fn ensure_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(param(field, format!("must be finite, got {value}")))
    }
}
