use thiserror::Error;

use crate::spectra::Peak;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {value:?} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A matching formula was evaluated outside the reflective-mirror regime.
    #[error("`{name}` = {value:?} is outside the domain of the matching relations ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("boundary problem is singular: multiple-reflection denominator {denominator:e}")]
    SingularBoundary { denominator: f64 },

    #[error("coupled-mode steady state is singular at omega = {omega:?}")]
    SingularSystem { omega: f64 },

    #[error("invalid stack: {0}")]
    InvalidStack(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("lorentzian fit did not converge after {iterations} iterations")]
    FitFailure { iterations: usize, best: Peak },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}
