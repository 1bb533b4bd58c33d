use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::run::RunResult;
use crate::dynamics::TimeSeries;
use crate::units::{au_to_fs, field_au_to_v_per_m, hartree_to_mev};
use crate::Result;

pub const CSV_COLUMNS: [&str; 12] = [
    "t_fs",
    "P_target",
    "Phi_target_rad",
    "field_au",
    "field_V_per_m",
    "envelope_V_per_m",
    "detuning_meV",
    "P_rwa",
    "phi_rwa_rad",
    "P_full",
    "phi_full_rad",
    "norm_residual",
];

// shortest representation that parses back to the same f64
fn num(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_string()
    } else {
        String::new()
    }
}

fn sim_cells(series: Option<&TimeSeries>, k: usize) -> (String, String) {
    match series {
        Some(s) => (num(s.populations_g[k]), num(s.relative_phase[k])),
        None => (String::new(), String::new()),
    }
}

/// Writes the run as CSV, one row per output-grid point. Returns the number
/// of data rows.
pub fn emit_csv<W: Write>(r: &RunResult, dest: W) -> Result<usize> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(dest);
    w.write_record(CSV_COLUMNS)?;
    let rwa = r.series_rwa.as_ref();
    let full = r.series_full.as_ref();
    let mut rows = 0;
    for (k, t) in r.times().enumerate() {
        let fs = &r.field_series[k];
        let (p_rwa, phi_rwa) = sim_cells(rwa, k);
        let (p_full, phi_full) = sim_cells(full, k);
        let norm = [rwa, full]
            .into_iter()
            .flatten()
            .map(|s| s.norm_residual[k])
            .reduce(f64::max)
            .map(num)
            .unwrap_or_default();
        w.write_record([
            num(au_to_fs(t)),
            num(r.p_target[k]),
            num(r.phi_target[k]),
            num(fs.epsilon),
            num(field_au_to_v_per_m(fs.epsilon)),
            num(field_au_to_v_per_m(fs.envelope)),
            num(hartree_to_mev(fs.detuning)),
            p_rwa,
            phi_rwa,
            p_full,
            phi_full,
            norm,
        ])?;
        rows += 1;
    }
    w.flush()?;
    Ok(rows)
}

pub fn write_csv_file(r: &RunResult, path: impl AsRef<Path>) -> Result<usize> {
    let file = File::create(path.as_ref())?;
    emit_csv(r, BufWriter::new(file))
}
