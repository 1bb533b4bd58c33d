//! Reverse-engineered control of two-level quantum systems.
//!
//! Prescribe the ground-level population `P(t)` and the relative phase
//! `Φ(t)`; this crate returns the real control field that makes the system
//! follow them under the rotating-wave approximation, checks the pair for
//! feasibility, and verifies the field by integrating the Schrödinger
//! equation with and without the RWA.
//!
//! All quantities are in hartree atomic units internally; see [`units`].

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
mod error;
pub mod harness;
pub mod synthesis;
pub mod system;
pub mod trajectories;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use dynamics::{init_state, integrate, Drive, QuantumState, TimeSeries};
pub use harness::{load_scenario, preset, run, RunOptions, RunResult, Scenario, SummaryMetrics};
pub use synthesis::{field_at, FieldSample, FieldSynthesizer, SynthesisMode};
pub use system::{make_system, SystemParams, TimeGrid};
pub use trajectories::{PhaseTrajectory, PopulationTrajectory, TrajectorySample, ValidationReport};
