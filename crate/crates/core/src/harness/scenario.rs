use serde::{Deserialize, Serialize};

use crate::synthesis::{check_constant_population, SynthesisMode};
use crate::system::{make_system, SystemParams};
use crate::trajectories::{build_quadratic_vertex, PhaseTrajectory, PopulationTrajectory};
use crate::units::{fs_to_au, per_fs_to_au};
use crate::{Error, Result};

/// Scenario document as written by the user: eV, fs, 1/fs and radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub system: SystemConfig,
    pub time: TimeConfig,
    pub population: PopulationSpec,
    pub phase: PhaseSpec,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub synthesis_mode: ModeConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub omega0_ev: f64,
    pub mu_au: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t0_fs: f64,
    pub tf_fs: f64,
    #[serde(default = "default_steps_per_period")]
    pub steps_per_period: usize,
    #[serde(default = "default_rwa_steps")]
    pub rwa_steps: usize,
    #[serde(default = "default_output_samples")]
    pub output_samples: usize,
}

fn default_steps_per_period() -> usize {
    200
}

fn default_rwa_steps() -> usize {
    2000
}

fn default_output_samples() -> usize {
    2000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PopulationSpec {
    Constant {
        value: f64,
    },
    Linear {
        initial: f64,
        #[serde(rename = "final")]
        target: f64,
    },
    QuadraticThroughHalf {
        initial: f64,
        #[serde(rename = "final")]
        target: f64,
        t_half_fs: f64,
    },
    Tanh {
        initial: f64,
        #[serde(rename = "final")]
        target: f64,
        rate_per_fs: f64,
        t_half_fs: f64,
    },
    Sech {
        ends: f64,
        peak: f64,
        rate_per_fs: f64,
        t_peak_fs: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseSpec {
    Constant {
        value: f64,
    },
    Linear {
        initial: f64,
        #[serde(rename = "final")]
        target: f64,
    },
    QuadraticVertex {
        initial: f64,
        #[serde(rename = "final")]
        target: f64,
        t_vertex_fs: f64,
    },
    SechPair {
        initial: f64,
        #[serde(rename = "final")]
        target: f64,
        peak: f64,
        rate_per_fs: f64,
        t_peak_fs: f64,
    },
    Tanh {
        initial: f64,
        #[serde(rename = "final")]
        target: f64,
        rate_per_fs: f64,
        t_center_fs: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub rwa: bool,
    pub full: bool,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            rwa: true,
            full: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeConfig {
    #[default]
    General,
    ConstantPhase,
    ConstantPopulation,
}

impl From<ModeConfig> for SynthesisMode {
    fn from(m: ModeConfig) -> Self {
        match m {
            ModeConfig::General => SynthesisMode::General,
            ModeConfig::ConstantPhase => SynthesisMode::ConstantPhase,
            ModeConfig::ConstantPopulation => SynthesisMode::ConstantPopulation,
        }
    }
}

/// A scenario with all quantities resolved to atomic units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub system: SystemParams,
    pub t0: f64,
    pub tf: f64,
    pub steps_per_period: usize,
    pub rwa_steps: usize,
    pub output_samples: usize,
    pub population: PopulationTrajectory,
    pub phase: PhaseTrajectory,
    pub simulate: SimulateConfig,
    pub mode: SynthesisMode,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn with_path(prefix: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, reason } => {
            let path = if name.starts_with(prefix) {
                name.to_string()
            } else {
                format!("{prefix}.{name}")
            };
            schema(path, reason)
        }
        other => other,
    }
}

impl Scenario {
    pub fn from_config(config: ScenarioConfig) -> Result<Self> {
        let system = make_system(config.system.omega0_ev, config.system.mu_au)
            .map_err(|e| with_path("system", e))?;
        let tc = &config.time;
        if !(tc.t0_fs.is_finite() && tc.tf_fs.is_finite() && tc.tf_fs > tc.t0_fs) {
            return Err(schema("time.tf_fs", "must exceed time.t0_fs"));
        }
        if tc.steps_per_period == 0 {
            return Err(schema("time.steps_per_period", "must be positive"));
        }
        if tc.rwa_steps < 2 {
            return Err(schema("time.rwa_steps", "must be at least 2"));
        }
        if tc.output_samples < 3 {
            return Err(schema("time.output_samples", "must be at least 3"));
        }
        let (t0, tf) = (fs_to_au(tc.t0_fs), fs_to_au(tc.tf_fs));

        let population = resolve_population(&config.population, t0, tf)
            .map_err(|e| with_path("population", e))?;
        let phase = resolve_phase(&config.phase, t0, tf).map_err(|e| with_path("phase", e))?;

        match config.synthesis_mode {
            ModeConfig::ConstantPopulation => {
                let PopulationSpec::Constant { value } = config.population else {
                    return Err(schema(
                        "synthesis_mode",
                        "constant_population requires a constant population",
                    ));
                };
                check_constant_population(value).map_err(|e| with_path("population", e))?;
            }
            ModeConfig::ConstantPhase => {
                if !phase.is_constant() {
                    return Err(schema(
                        "synthesis_mode",
                        "constant_phase requires a constant phase",
                    ));
                }
            }
            ModeConfig::General => {}
        }

        Ok(Self {
            system,
            t0,
            tf,
            steps_per_period: tc.steps_per_period,
            rwa_steps: tc.rwa_steps,
            output_samples: tc.output_samples,
            population,
            phase,
            simulate: config.simulate,
            mode: config.synthesis_mode.into(),
            config,
        })
    }
}

fn resolve_population(spec: &PopulationSpec, t0: f64, tf: f64) -> Result<PopulationTrajectory> {
    match *spec {
        PopulationSpec::Constant { value } => PopulationTrajectory::constant(value),
        PopulationSpec::Linear { initial, target } => {
            PopulationTrajectory::linear(initial, target, t0, tf)
        }
        PopulationSpec::QuadraticThroughHalf {
            initial,
            target,
            t_half_fs,
        } => PopulationTrajectory::quadratic_through_half(
            initial,
            target,
            fs_to_au(t_half_fs),
            t0,
            tf,
        ),
        PopulationSpec::Tanh {
            initial,
            target,
            rate_per_fs,
            t_half_fs,
        } => PopulationTrajectory::tanh(
            initial,
            target,
            per_fs_to_au(rate_per_fs),
            fs_to_au(t_half_fs),
        ),
        PopulationSpec::Sech {
            ends,
            peak,
            rate_per_fs,
            t_peak_fs,
        } => PopulationTrajectory::sech(ends, peak, per_fs_to_au(rate_per_fs), fs_to_au(t_peak_fs)),
    }
}

fn resolve_phase(spec: &PhaseSpec, t0: f64, tf: f64) -> Result<PhaseTrajectory> {
    match *spec {
        PhaseSpec::Constant { value } => PhaseTrajectory::constant(value),
        PhaseSpec::Linear { initial, target } => PhaseTrajectory::linear(initial, target, t0, tf),
        PhaseSpec::QuadraticVertex {
            initial,
            target,
            t_vertex_fs,
        } => build_quadratic_vertex(initial, target, fs_to_au(t_vertex_fs), t0, tf),
        PhaseSpec::SechPair {
            initial,
            target,
            peak,
            rate_per_fs,
            t_peak_fs,
        } => PhaseTrajectory::sech_pair(
            initial,
            target,
            peak,
            per_fs_to_au(rate_per_fs),
            fs_to_au(t_peak_fs),
            t0,
            tf,
        ),
        PhaseSpec::Tanh {
            initial,
            target,
            rate_per_fs,
            t_center_fs,
        } => PhaseTrajectory::tanh(
            initial,
            target,
            per_fs_to_au(rate_per_fs),
            fs_to_au(t_center_fs),
        ),
    }
}

/// Parses a JSON scenario document and resolves it.
pub fn load_scenario(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })?;
    Scenario::from_config(config)
}
