//! Built-in scenarios reproducing the reference demonstrations on the sodium
//! 3s → 3p transition (ω₀ = 2.1 eV, μ = 2.479 a.u., t₀ = 0).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use super::scenario::{
    ModeConfig, PhaseSpec, PopulationSpec, Scenario, ScenarioConfig, SimulateConfig, SystemConfig,
    TimeConfig,
};
use crate::{Error, Result};

pub const PRESET_NAMES: [&str; 5] = ["fig2", "fig3", "fig4", "fig5", "fig6"];

fn sodium() -> SystemConfig {
    SystemConfig {
        omega0_ev: 2.1,
        mu_au: 2.479,
    }
}

fn window(tf_fs: f64) -> TimeConfig {
    TimeConfig {
        t0_fs: 0.0,
        tf_fs,
        steps_per_period: 200,
        rwa_steps: 2000,
        output_samples: 2000,
    }
}

/// The scenario document behind a preset.
pub fn preset_config(name: &str) -> Result<ScenarioConfig> {
    let (time, population, phase, mode) = match name {
        // population held at 0.3 while the phase ramps linearly to π/4
        "fig2" => (
            window(100.0),
            PopulationSpec::Constant { value: 0.3 },
            PhaseSpec::Linear {
                initial: 0.0,
                target: FRAC_PI_4,
            },
            ModeConfig::ConstantPopulation,
        ),
        // linear population, quadratic phase stationary at the crossing
        "fig3" => (
            window(100.0),
            PopulationSpec::Linear {
                initial: 0.8,
                target: 0.3,
            },
            PhaseSpec::QuadraticVertex {
                initial: 0.0,
                target: FRAC_PI_4,
                t_vertex_fs: 60.0,
            },
            ModeConfig::General,
        ),
        "fig4" => (
            window(100.0),
            PopulationSpec::Tanh {
                initial: 0.1,
                target: 1.0,
                rate_per_fs: 0.068,
                t_half_fs: 60.0,
            },
            PhaseSpec::QuadraticVertex {
                initial: 0.0,
                target: FRAC_PI_2,
                t_vertex_fs: 60.0,
            },
            ModeConfig::General,
        ),
        // near-complete inversion with a smooth bell-shaped pulse
        "fig5" => (
            window(200.0),
            PopulationSpec::Tanh {
                initial: 0.99,
                target: 0.01,
                rate_per_fs: 0.04,
                t_half_fs: 100.0,
            },
            PhaseSpec::SechPair {
                initial: 0.0,
                target: FRAC_PI_4,
                peak: 1.4 * FRAC_PI_4,
                rate_per_fs: 1.65 * 0.04,
                t_peak_fs: 100.0,
            },
            ModeConfig::General,
        ),
        // equal end populations, phase moved by π/8
        "fig6" => (
            window(200.0),
            PopulationSpec::Sech {
                ends: 0.5,
                peak: 0.7,
                rate_per_fs: 0.08,
                t_peak_fs: 100.0,
            },
            PhaseSpec::Tanh {
                initial: 0.0,
                target: FRAC_PI_8,
                rate_per_fs: 0.08,
                t_center_fs: 100.0,
            },
            ModeConfig::General,
        ),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(ScenarioConfig {
        system: sodium(),
        time,
        population,
        phase,
        simulate: SimulateConfig::default(),
        synthesis_mode: mode,
    })
}

/// Resolves one of `fig2` … `fig6`.
pub fn preset(name: &str) -> Result<Scenario> {
    Scenario::from_config(preset_config(name)?)
}
