//! Feasibility checks on a trajectory pair.
//!
//! C1: the population stays a probability.
//! C2: the population is stationary wherever it touches 0 or 1.
//! C3: the relative phase is stationary wherever the populations are equal.
//! C4: the synthesized field stays in the near-resonant, weak-drive regime.
//! CPhaseRel: the field formulas are finite on the grid.

use std::fmt;

use super::{find_half_crossings, PhaseTrajectory, PopulationTrajectory};
use crate::synthesis::FieldSynthesizer;
use crate::system::{SystemParams, TimeGrid};
use crate::units::per_fs_to_au;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintId {
    C1,
    C2,
    C3,
    C4,
    CPhaseRel,
}

impl ConstraintId {
    pub fn severity(self) -> Severity {
        match self {
            ConstraintId::C4 => Severity::Warning,
            _ => Severity::Hard,
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConstraintId::C1 => "C1",
            ConstraintId::C2 => "C2",
            ConstraintId::C3 => "C3",
            ConstraintId::C4 => "C4",
            ConstraintId::CPhaseRel => "CPhaseRel",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    /// Breaks the construction; runs are refused.
    Hard,
    /// The RWA regime heuristic; reported but not blocking.
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: ConstraintId,
    /// Time of the worst offence (a.u.).
    pub time: f64,
    pub magnitude: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_accepted(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn hard_violations(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.constraint.severity() == Severity::Hard)
    }

    pub fn has_hard_violations(&self) -> bool {
        self.hard_violations().next().is_some()
    }

    pub fn find(&self, id: ConstraintId) -> Option<&Violation> {
        self.violations.iter().find(|v| v.constraint == id)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "accepted: no constraint violations");
        }
        for v in &self.violations {
            let tag = match v.constraint.severity() {
                Severity::Hard => "error",
                Severity::Warning => "warning",
            };
            writeln!(
                f,
                "{tag} [{}] t = {:.6} fs, magnitude {:.6e}: {}",
                v.constraint,
                crate::units::au_to_fs(v.time),
                v.magnitude,
                v.message
            )?;
        }
        Ok(())
    }
}

/// Thresholds for [`validate`], in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationTolerances {
    pub pop: f64,
    pub half: f64,
    /// |Ṗ| allowed at an extremum (a.u.⁻¹).
    pub rate: f64,
    /// |Φ̇| allowed at equal populations (rad per a.u.).
    pub phase_rate: f64,
    /// Rabi frequency and detuning ceiling as a fraction of ω₀.
    pub rwa_fraction: f64,
}

impl Default for ValidationTolerances {
    fn default() -> Self {
        Self {
            pop: 1e-6,
            half: 1e-3,
            rate: per_fs_to_au(1e-6),
            phase_rate: per_fs_to_au(1e-4),
            rwa_fraction: 0.1,
        }
    }
}

/// Minimum grid intervals for validation: ten samples per carrier period.
pub fn required_validation_steps(sys: &SystemParams, grid: &TimeGrid) -> usize {
    (10.0 * grid.span() / sys.period()).ceil() as usize
}

#[derive(Default)]
struct Worst {
    hit: Option<(f64, f64)>,
}

impl Worst {
    fn offer(&mut self, t: f64, magnitude: f64) {
        match self.hit {
            Some((_, m)) if m >= magnitude => {}
            _ => self.hit = Some((t, magnitude)),
        }
    }
}

/// Checks the trajectory pair on `grid`. A grid coarser than ten points per
/// carrier period is refined before scanning.
pub fn validate(
    sys: &SystemParams,
    pop: &PopulationTrajectory,
    phase: &PhaseTrajectory,
    grid: &TimeGrid,
    tols: &ValidationTolerances,
) -> ValidationReport {
    let needed = required_validation_steps(sys, grid);
    let grid = if grid.n_steps() < needed {
        TimeGrid::new(grid.t0(), grid.tf(), needed).expect("refined grid is valid")
    } else {
        *grid
    };

    let mut c1 = Worst::default();
    let mut c2 = Worst::default();
    let mut c3 = Worst::default();
    let mut rabi = Worst::default();
    let mut detuning = Worst::default();
    let mut singular: Option<(f64, String)> = None;

    let synth = FieldSynthesizer::new(*sys, pop, phase);
    let check_half = |t: f64, c3: &mut Worst| {
        let rate = phase.eval(t).d1.abs();
        if rate > tols.phase_rate {
            c3.offer(t, rate);
        }
    };

    // contiguous runs of grid indices with |P - 1/2| <= tol_half
    let mut band: Vec<(usize, usize)> = Vec::new();
    for (k, t) in grid.times().enumerate() {
        let p = pop.eval(t);
        let out_of_range = (-p.value).max(p.value - 1.0);
        if out_of_range > tols.pop {
            c1.offer(t, out_of_range);
        }
        if (p.value <= tols.pop || p.value >= 1.0 - tols.pop) && p.d1.abs() > tols.rate {
            c2.offer(t, p.d1.abs());
        }
        if (p.value - 0.5).abs() <= tols.half {
            match band.last_mut() {
                Some(seg) if seg.1 == k - 1 => seg.1 = k,
                _ => band.push((k, k)),
            }
        }
        match synth.sample(t) {
            Ok(fs) => {
                rabi.offer(t, (sys.mu() * fs.envelope).abs());
                detuning.offer(t, fs.detuning.abs());
            }
            Err(e) => {
                if singular.is_none() {
                    singular = Some((t, e.to_string()));
                }
            }
        }
    }
    // Φ̇ must vanish at each crossing of 1/2. Where P only approaches 1/2
    // without crossing, every in-band sample is held to the tolerance.
    let crossings = find_half_crossings(pop, &grid, 1e-6).unwrap_or_default();
    for &t in &crossings {
        check_half(t, &mut c3);
    }
    for &(first, last) in &band {
        let lo = grid.time(first.saturating_sub(1));
        let hi = grid.time((last + 1).min(grid.n_steps()));
        if !crossings.iter().any(|&tc| tc >= lo && tc <= hi) {
            for k in first..=last {
                check_half(grid.time(k), &mut c3);
            }
        }
    }

    let ceiling = tols.rwa_fraction * sys.omega0();
    let mut violations = Vec::new();
    if let Some((t, m)) = c1.hit {
        violations.push(Violation {
            constraint: ConstraintId::C1,
            time: t,
            magnitude: m,
            message: format!("population leaves [0, 1] by {m:.3e}"),
        });
    }
    if let Some((t, m)) = c2.hit {
        violations.push(Violation {
            constraint: ConstraintId::C2,
            time: t,
            magnitude: m,
            message: format!("population reaches 0 or 1 with nonzero derivative {m:.3e} a.u."),
        });
    }
    if let Some((t, m)) = c3.hit {
        violations.push(Violation {
            constraint: ConstraintId::C3,
            time: t,
            magnitude: m,
            message: format!(
                "relative phase moves at {m:.3e} rad/a.u. while populations are equal"
            ),
        });
    }
    if let Some((t, m)) = rabi.hit.filter(|&(_, m)| m > ceiling) {
        violations.push(Violation {
            constraint: ConstraintId::C4,
            time: t,
            magnitude: m,
            message: format!("peak Rabi frequency {m:.3e} exceeds {ceiling:.3e} (omega0/10)"),
        });
    }
    if let Some((t, m)) = detuning.hit.filter(|&(_, m)| m > ceiling) {
        violations.push(Violation {
            constraint: ConstraintId::C4,
            time: t,
            magnitude: m,
            message: format!("peak detuning {m:.3e} exceeds {ceiling:.3e} (omega0/10)"),
        });
    }
    if let Some((t, msg)) = singular {
        violations.push(Violation {
            constraint: ConstraintId::CPhaseRel,
            time: t,
            magnitude: f64::INFINITY,
            message: msg,
        });
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::sodium;
    use crate::trajectories::build_quadratic_vertex;
    use crate::units::fs_to_au;
    use std::f64::consts::FRAC_PI_4;

    fn window() -> TimeGrid {
        TimeGrid::new(0.0, fs_to_au(100.0), 2000).unwrap()
    }

    #[test]
    fn linear_with_vertex_phase_is_accepted() {
        let g = window();
        let pop = PopulationTrajectory::linear(0.8, 0.3, g.t0(), g.tf()).unwrap();
        let phase = build_quadratic_vertex(0.0, FRAC_PI_4, fs_to_au(60.0), g.t0(), g.tf()).unwrap();
        let r = validate(
            &sodium(),
            &pop,
            &phase,
            &g,
            &ValidationTolerances::default(),
        );
        assert!(r.is_accepted(), "{r}");
    }

    #[test]
    fn linear_to_one_breaks_c2() {
        let g = window();
        let pop = PopulationTrajectory::linear(0.5, 1.0, g.t0(), g.tf()).unwrap();
        let phase = PhaseTrajectory::constant(0.0).unwrap();
        let r = validate(
            &sodium(),
            &pop,
            &phase,
            &g,
            &ValidationTolerances::default(),
        );
        let v = r.find(ConstraintId::C2).expect("C2");
        assert_eq!(v.time, g.tf());
        assert!(r.has_hard_violations());
    }

    #[test]
    fn moving_phase_at_crossing_breaks_c3() {
        let g = window();
        let pop = PopulationTrajectory::linear(0.8, 0.3, g.t0(), g.tf()).unwrap();
        let phase = PhaseTrajectory::linear(0.0, FRAC_PI_4, g.t0(), g.tf()).unwrap();
        let r = validate(
            &sodium(),
            &pop,
            &phase,
            &g,
            &ValidationTolerances::default(),
        );
        let v = r.find(ConstraintId::C3).expect("C3");
        assert!(
            (v.time - fs_to_au(60.0)).abs() < fs_to_au(1.0),
            "{}",
            v.time
        );
    }

    #[test]
    fn overdriven_field_is_only_a_warning() {
        let g = window();
        // a fast tanh: peak Rabi frequency well above omega0/10
        let pop = PopulationTrajectory::tanh(0.1, 0.9, 0.2, fs_to_au(50.0)).unwrap();
        let phase = PhaseTrajectory::constant(0.0).unwrap();
        let r = validate(
            &sodium(),
            &pop,
            &phase,
            &g,
            &ValidationTolerances::default(),
        );
        assert!(r.find(ConstraintId::C4).is_some(), "{r}");
        assert!(!r.has_hard_violations(), "{r}");
    }

    #[test]
    fn population_outside_unit_interval_breaks_c1() {
        let g = window();
        let pop =
            PopulationTrajectory::quadratic_through_half(0.9, 0.95, fs_to_au(5.0), g.t0(), g.tf())
                .unwrap();
        let phase = PhaseTrajectory::constant(0.0).unwrap();
        let r = validate(
            &sodium(),
            &pop,
            &phase,
            &g,
            &ValidationTolerances::default(),
        );
        assert!(r.find(ConstraintId::C1).is_some(), "{r}");
    }
}
