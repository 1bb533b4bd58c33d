//! Benchmark fixtures for revctl.

use revctl_core::harness::PRESET_NAMES;
use revctl_core::{preset, Scenario};

/// Every built-in scenario, resolved.
pub fn all_presets() -> Vec<(&'static str, Scenario)> {
    PRESET_NAMES
        .iter()
        .map(|&name| (name, preset(name).expect("built-in preset")))
        .collect()
}
