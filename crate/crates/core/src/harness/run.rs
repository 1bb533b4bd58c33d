use crate::dynamics::{init_state, integrate_strided, Drive, TimeSeries, FULL_STEPS_PER_PERIOD};
use crate::synthesis::{near_half_warning, FieldSample, FieldSynthesizer, SynthesisMode};
use crate::system::TimeGrid;
use crate::trajectories::{
    required_validation_steps, validate, ValidationReport, ValidationTolerances,
};
use crate::units::{field_au_to_v_per_m, hartree_to_mev};
use crate::{Error, Result};

use super::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    /// Run even when the validator reports hard violations.
    pub override_validation: bool,
    pub tolerances: ValidationTolerances,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryMetrics {
    /// |P_sim(tf) − P(tf)|
    pub final_pop_error: f64,
    /// |φ_sim(tf) − Φ^f| (rad), on the unwrapped record.
    pub final_phase_error: f64,
    /// max |P_sim(t) − P(t)| over the output grid.
    pub max_pop_deviation: f64,
    pub max_norm_residual: f64,
    /// max |V₀| (V/m).
    pub peak_field_v_per_m: f64,
    /// Detuning of largest magnitude, signed (meV).
    pub peak_detuning_mev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub scenario: Scenario,
    pub output_grid: TimeGrid,
    /// Prescribed P(t) on the output grid.
    pub p_target: Vec<f64>,
    /// Prescribed Φ(t) on the output grid.
    pub phi_target: Vec<f64>,
    /// Λ on each field sample is unwrapped by multiples of 2π along the grid.
    pub field_series: Vec<FieldSample>,
    pub series_rwa: Option<TimeSeries>,
    pub series_full: Option<TimeSeries>,
    pub validation: ValidationReport,
    pub warnings: Vec<String>,
    /// Metrics of the full simulation if present, else of the RWA one.
    pub summary: Option<SummaryMetrics>,
}

impl RunResult {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.output_grid.times()
    }

    /// P(tf) of the prescribed trajectory.
    pub fn final_population_target(&self) -> f64 {
        *self.p_target.last().expect("non-empty grid")
    }

    /// Nominal Φ^f of the prescribed trajectory.
    pub fn final_phase_target(&self) -> f64 {
        self.scenario.phase.nominal_final()
    }
}

/// Validate, synthesize, simulate and summarize one scenario.
pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<RunResult> {
    let sys = scenario.system;
    let output_grid = TimeGrid::new(scenario.t0, scenario.tf, scenario.output_samples - 1)?;

    let val_steps = output_grid
        .n_steps()
        .max(required_validation_steps(&sys, &output_grid));
    let val_grid = TimeGrid::new(scenario.t0, scenario.tf, val_steps)?;
    let validation = validate(
        &sys,
        &scenario.population,
        &scenario.phase,
        &val_grid,
        &opts.tolerances,
    );
    if validation.has_hard_violations() && !opts.override_validation {
        return Err(Error::ValidationRefused {
            count: validation.hard_violations().count(),
            report: validation,
        });
    }

    let mut warnings = Vec::new();
    if scenario.mode == SynthesisMode::ConstantPopulation {
        warnings.extend(near_half_warning(scenario.population.nominal_initial()));
    }
    warnings.extend(
        validation
            .violations
            .iter()
            .filter(|v| v.constraint.severity() == crate::trajectories::Severity::Warning)
            .map(|v| format!("[{}] {}", v.constraint, v.message)),
    );

    let synth =
        FieldSynthesizer::new(sys, &scenario.population, &scenario.phase).with_mode(scenario.mode);

    let mut p_target = Vec::with_capacity(scenario.output_samples);
    let mut phi_target = Vec::with_capacity(scenario.output_samples);
    let mut field_series = Vec::with_capacity(scenario.output_samples);
    for t in output_grid.times() {
        p_target.push(scenario.population.eval(t).value);
        phi_target.push(scenario.phase.eval(t).value);
        field_series.push(synth.sample(t)?);
    }
    unwrap_lambda(&mut field_series);

    let s0 = init_state(
        scenario.population.eval(scenario.t0).value,
        scenario.phase.eval(scenario.t0).value,
    )?;
    let n_out = output_grid.n_steps();

    let series_rwa = if scenario.simulate.rwa {
        let stride = scenario.rwa_steps.div_ceil(n_out).max(1);
        let envelope = |t: f64| synth.envelope(t);
        Some(integrate_strided(
            &sys,
            &Drive::Rwa(&envelope),
            s0,
            &output_grid.refined(stride),
            stride,
        )?)
    } else {
        None
    };

    let series_full = if scenario.simulate.full {
        let per_period = scenario.steps_per_period as f64;
        let needed = (output_grid.span() * per_period / sys.period()).ceil() as usize;
        let stride = needed.div_ceil(n_out).max(1);
        if scenario.steps_per_period < FULL_STEPS_PER_PERIOD {
            // let the integrator report the step it needs
            let coarse = TimeGrid::new(scenario.t0, scenario.tf, needed.max(2))?;
            let zero = |_t: f64| Ok(0.0);
            integrate_strided(&sys, &Drive::Full(&zero), s0, &coarse, 1)?;
        }
        let field = |t: f64| synth.epsilon(t);
        Some(integrate_strided(
            &sys,
            &Drive::Full(&field),
            s0,
            &output_grid.refined(stride),
            stride,
        )?)
    } else {
        None
    };

    let mut result = RunResult {
        scenario: scenario.clone(),
        output_grid,
        p_target,
        phi_target,
        field_series,
        series_rwa,
        series_full,
        validation,
        warnings,
        summary: None,
    };
    result.summary = summarize(&result).ok();
    Ok(result)
}

fn unwrap_lambda(samples: &mut [FieldSample]) {
    use std::f64::consts::TAU;
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for s in samples.iter_mut() {
        let mut l = s.lambda + offset;
        if let Some(p) = prev {
            let jumps = ((l - p) / TAU).round();
            offset -= jumps * TAU;
            l -= jumps * TAU;
        }
        let shift = l - s.lambda;
        s.lambda = l;
        s.modulation_phase += shift;
        s.total_phase += shift;
        prev = Some(l);
    }
}

/// Summary of one simulated series against the run's targets.
pub fn summarize_series(r: &RunResult, series: &TimeSeries) -> SummaryMetrics {
    let (_, last) = series.last().expect("non-empty series");
    let phase_final = *series.relative_phase.last().expect("non-empty series");
    let max_pop_deviation = series
        .populations_g
        .iter()
        .zip(&r.p_target)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    let peak_field = r
        .field_series
        .iter()
        .map(|f| f.envelope.abs())
        .fold(0.0, f64::max);
    let peak_detuning = r
        .field_series
        .iter()
        .map(|f| f.detuning)
        .fold(0.0, |acc: f64, d| if d.abs() > acc.abs() { d } else { acc });
    SummaryMetrics {
        final_pop_error: (last.population_g() - r.final_population_target()).abs(),
        final_phase_error: (phase_final - r.final_phase_target()).abs(),
        max_pop_deviation,
        max_norm_residual: series.max_norm_residual(),
        peak_field_v_per_m: field_au_to_v_per_m(peak_field),
        peak_detuning_mev: hartree_to_mev(peak_detuning),
    }
}

/// Metrics of the full simulation when present, otherwise of the RWA one.
pub fn summarize(r: &RunResult) -> Result<SummaryMetrics> {
    let series = r
        .series_full
        .as_ref()
        .or(r.series_rwa.as_ref())
        .ok_or(Error::NoSimulation)?;
    Ok(summarize_series(r, series))
}
