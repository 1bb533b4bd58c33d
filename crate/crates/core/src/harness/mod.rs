//! Scenario configuration, built-in presets, the run pipeline and CSV output.

mod csv_out;
mod presets;
mod run;
mod scenario;

pub use csv_out::{emit_csv, write_csv_file, CSV_COLUMNS};
pub use presets::{preset, preset_config, PRESET_NAMES};
pub use run::{run, summarize, summarize_series, RunOptions, RunResult, SummaryMetrics};
pub use scenario::{
    load_scenario, ModeConfig, PhaseSpec, PopulationSpec, Scenario, ScenarioConfig, SimulateConfig,
    SystemConfig, TimeConfig,
};
