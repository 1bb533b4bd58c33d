use thiserror::Error;

use crate::units::Unit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported unit conversion: {from} -> {to}")]
    UnsupportedConversion { from: Unit, to: Unit },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The field formulas diverge at this instant.
    #[error("field singularity at t = {t} a.u.: {reason}")]
    Singularity { t: f64, reason: String },

    #[error("integrator step {step} a.u. exceeds the allowed maximum {max_step} a.u. (need at least {required_steps} steps)")]
    StepTooLarge {
        step: f64,
        max_step: f64,
        required_steps: usize,
    },

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("unknown preset `{0}` (expected one of fig2, fig3, fig4, fig5, fig6)")]
    UnknownPreset(String),

    #[error("validation refused the scenario with {count} hard violation(s)")]
    ValidationRefused {
        count: usize,
        report: crate::trajectories::ValidationReport,
    },

    #[error("no simulation present in run result")]
    NoSimulation,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn singular(t: f64, reason: impl Into<String>) -> Self {
        Error::Singularity {
            t,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
