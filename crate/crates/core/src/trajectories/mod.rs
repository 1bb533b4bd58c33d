//! Prescribed population and relative-phase trajectories.
//!
//! Each family returns its value together with analytic first and second
//! time derivatives, all in atomic units. Parameters are resolved into the
//! coefficients of the closed form at construction time so that evaluation
//! is a handful of floating-point operations.

mod phase;
mod population;
mod validate;

pub use phase::{build_quadratic_vertex, PhaseTrajectory};
pub use population::{find_half_crossings, PopulationTrajectory};
pub use validate::{
    required_validation_steps, validate, ConstraintId, Severity, ValidationReport,
    ValidationTolerances, Violation,
};

/// Value and first two time derivatives of a trajectory at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl TrajectorySample {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

#[inline]
pub(crate) fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

pub(crate) fn check_finite(name: &'static str, v: f64) -> crate::Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::invalid(
            name,
            format!("must be finite, got {v}"),
        ))
    }
}

pub(crate) fn check_probability(name: &'static str, p: f64) -> crate::Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(crate::Error::invalid(
            name,
            format!("probability must lie in [0, 1], got {p}"),
        ))
    }
}

pub(crate) fn check_window(t0: f64, tf: f64) -> crate::Result<()> {
    if t0.is_finite() && tf.is_finite() && tf > t0 {
        Ok(())
    } else {
        Err(crate::Error::invalid(
            "window",
            format!("need tf > t0, got [{t0}, {tf}]"),
        ))
    }
}
