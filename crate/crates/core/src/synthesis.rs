//! Control-field synthesis from a prescribed population and relative phase.
//!
//! The field is evaluated in quadrature form,
//!
//! ```text
//! ε(t) = (2/μ) [A sin θ + B cos θ],   θ = ω₀t + Φ(t)
//! A = Ṗ / (2√(P(1−P)))
//! B = Φ̇ √(P(1−P)) / (1 − 2P)
//! ```
//!
//! which equals `V₀ sin(θ + Λ)` with `V₀ = sgn(Ṗ)(2/μ)√(A² + B²)` and
//! `Λ = atan2(sgn(Ṗ)B, sgn(Ṗ)A)`. The quadrature form has no sign
//! singularity where Ṗ vanishes, so ε is always computed from it and
//! `(V₀, Λ)` are reported alongside.

use num_complex::Complex64;

use crate::system::SystemParams;
use crate::trajectories::{PhaseTrajectory, PopulationTrajectory, TrajectorySample};
use crate::{Error, Result};

/// Numerical guards applied near the removable and true singularities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisGuards {
    /// P within this distance of 0 or 1 counts as an extremum.
    pub extremum_eps: f64,
    /// |1 − 2P| below this counts as the equal-population point.
    pub half_band: f64,
    /// Largest |Φ̇| (a.u.) tolerated inside `half_band`.
    pub half_phase_rate: f64,
    /// Rates below this magnitude (a.u.) are treated as zero.
    pub rate_floor: f64,
    /// Inside |1 − 2P| < this, Ḃ is interpolated instead of evaluated in closed form.
    pub detuning_band: f64,
}

impl Default for SynthesisGuards {
    fn default() -> Self {
        Self {
            extremum_eps: 1e-12,
            half_band: 1e-6,
            half_phase_rate: 1e-8,
            rate_floor: 1e-14,
            detuning_band: 1e-4,
        }
    }
}

/// Distance from 1/2 under which the fixed-population formula is discouraged.
pub const NEAR_HALF_WARNING: f64 = 0.05;

/// The in-phase (`a`) and quadrature (`b`) rates and the carrier angle θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureComponents {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
}

/// Synthesized field at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub t: f64,
    /// Real field ε(t) (a.u.).
    pub epsilon: f64,
    /// Signed envelope V₀ (a.u.).
    pub envelope: f64,
    /// Phase Λ (rad).
    pub lambda: f64,
    /// Φ + Λ (rad).
    pub modulation_phase: f64,
    /// ω₀t + Φ + Λ (rad).
    pub total_phase: f64,
    /// Instantaneous detuning Φ̇ + Λ̇ (a.u.).
    pub detuning: f64,
}

/// Which closed form builds the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SynthesisMode {
    #[default]
    General,
    ConstantPhase,
    ConstantPopulation,
}

pub fn quadrature_at(
    p: &TrajectorySample,
    phi: &TrajectorySample,
    t: f64,
    sys: &SystemParams,
) -> Result<QuadratureComponents> {
    quadrature_with(p, phi, t, sys, &SynthesisGuards::default())
}

pub fn quadrature_with(
    p: &TrajectorySample,
    phi: &TrajectorySample,
    t: f64,
    sys: &SystemParams,
    guards: &SynthesisGuards,
) -> Result<QuadratureComponents> {
    let (a, b) = rates(p, phi, t, guards)?;
    Ok(QuadratureComponents {
        a,
        b,
        theta: sys.omega0() * t + phi.value,
    })
}

fn rates(
    p: &TrajectorySample,
    phi: &TrajectorySample,
    t: f64,
    guards: &SynthesisGuards,
) -> Result<(f64, f64)> {
    let pv = p.value;
    if !(pv >= -guards.extremum_eps && pv <= 1.0 + guards.extremum_eps) {
        return Err(Error::singular(
            t,
            format!("population {pv} outside [0, 1]"),
        ));
    }
    if pv <= guards.extremum_eps || pv >= 1.0 - guards.extremum_eps {
        if p.d1.abs() > guards.rate_floor {
            return Err(Error::singular(
                t,
                format!(
                    "population at extremum {pv} with nonzero derivative {}",
                    p.d1
                ),
            ));
        }
        return Ok((0.0, 0.0));
    }
    let g = (pv * (1.0 - pv)).sqrt();
    let a = p.d1 / (2.0 * g);
    let d = 1.0 - 2.0 * pv;
    let b = if d.abs() < guards.half_band {
        if phi.d1.abs() > guards.half_phase_rate {
            return Err(Error::singular(
                t,
                format!(
                    "equal populations with nonzero relative-phase rate {}",
                    phi.d1
                ),
            ));
        }
        if p.d1.abs() > guards.rate_floor {
            // limit of Φ̇/(1 − 2P) along a simultaneous zero of both
            -phi.d2 * g / (2.0 * p.d1)
        } else {
            0.0
        }
    } else if phi.d1.abs() < guards.rate_floor {
        0.0
    } else {
        phi.d1 * g / d
    };
    Ok((a, b))
}

/// Signed envelope and phase such that `V₀ sin(θ + Λ) = (2/μ)(A sin θ + B cos θ)`.
///
/// The sign follows Ṗ (`p_rate`) and is positive when Ṗ = 0.
pub fn envelope_and_phase(q: &QuadratureComponents, p_rate: f64, mu: f64) -> (f64, f64) {
    if q.a == 0.0 && q.b == 0.0 {
        return (0.0, 0.0);
    }
    let sign = if p_rate < 0.0 { -1.0 } else { 1.0 };
    let v0 = sign * (2.0 / mu) * q.a.hypot(q.b);
    let lambda = (sign * q.b).atan2(sign * q.a);
    (v0, lambda)
}

fn assemble(
    sys: &SystemParams,
    q: &QuadratureComponents,
    p_rate: f64,
    phi: f64,
    t: f64,
    detuning: f64,
) -> FieldSample {
    let (v0, lambda) = envelope_and_phase(q, p_rate, sys.mu());
    let (s, c) = q.theta.sin_cos();
    FieldSample {
        t,
        epsilon: (2.0 / sys.mu()) * (q.a * s + q.b * c),
        envelope: v0,
        lambda,
        modulation_phase: phi + lambda,
        total_phase: q.theta + lambda,
        detuning,
    }
}

/// General reverse-engineered field for the pair `(P, Φ)` at `t`.
pub fn field_at(
    sys: &SystemParams,
    pop: &PopulationTrajectory,
    phase: &PhaseTrajectory,
    t: f64,
) -> Result<FieldSample> {
    FieldSynthesizer::new(*sys, pop, phase).sample(t)
}

/// Field for a phase held at `phi0`; the detuning is zero.
pub fn field_constant_phase(
    sys: &SystemParams,
    pop: &PopulationTrajectory,
    phi0: f64,
    t: f64,
) -> Result<FieldSample> {
    let p = pop.eval(t);
    if !(p.value > 0.0 && p.value < 1.0) {
        return Err(Error::singular(
            t,
            format!("population {} not inside (0, 1)", p.value),
        ));
    }
    let g = (p.value * (1.0 - p.value)).sqrt();
    let q = QuadratureComponents {
        a: p.d1 / (2.0 * g),
        b: 0.0,
        theta: sys.omega0() * t + phi0,
    };
    Ok(assemble(sys, &q, p.d1, phi0, t, 0.0))
}

/// Field for a population held at `p0`; the detuning is Φ̇.
///
/// `p0 = 1/2` is impossible: the relative phase cannot move while the
/// populations are equal.
pub fn field_constant_population(
    sys: &SystemParams,
    p0: f64,
    phase: &PhaseTrajectory,
    t: f64,
) -> Result<FieldSample> {
    check_constant_population(p0)?;
    let phi = phase.eval(t);
    let g = (p0 * (1.0 - p0)).sqrt();
    let q = QuadratureComponents {
        a: 0.0,
        b: phi.d1 * g / (1.0 - 2.0 * p0),
        theta: sys.omega0() * t + phi.value,
    };
    Ok(assemble(sys, &q, 0.0, phi.value, t, phi.d1))
}

pub(crate) fn check_constant_population(p0: f64) -> Result<()> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::invalid(
            "population",
            format!("must lie in (0, 1), got {p0}"),
        ));
    }
    if (1.0 - 2.0 * p0).abs() < SynthesisGuards::default().half_band {
        return Err(Error::invalid(
            "population",
            "the relative phase cannot change while the populations stay equal (P = 1/2)",
        ));
    }
    Ok(())
}

/// Warning text when a held population sits close to 1/2.
pub fn near_half_warning(p0: f64) -> Option<String> {
    ((p0 - 0.5).abs() < NEAR_HALF_WARNING).then(|| {
        format!(
            "held population {p0} is within {NEAR_HALF_WARNING} of 1/2; \
             the fixed-population field has a small denominator"
        )
    })
}

/// Instantaneous detuning Φ̇ + Λ̇ (a.u.).
pub fn detuning_at(pop: &PopulationTrajectory, phase: &PhaseTrajectory, t: f64) -> Result<f64> {
    detuning_with(pop, phase, t, &SynthesisGuards::default())
}

pub fn detuning_with(
    pop: &PopulationTrajectory,
    phase: &PhaseTrajectory,
    t: f64,
    guards: &SynthesisGuards,
) -> Result<f64> {
    let p = pop.eval(t);
    let phi = phase.eval(t);
    let (a, b) = rates(&p, &phi, t, guards)?;
    let norm2 = a * a + b * b;
    if norm2 < 1e-24 {
        return Ok(phi.d1);
    }
    let a_dot = rate_a_dot(&p);
    let d = 1.0 - 2.0 * p.value;
    let b_dot = if d.abs() >= guards.detuning_band || p.d1.abs() <= guards.rate_floor {
        rate_b_dot(&p, &phi)
    } else {
        // Closed-form Ḃ cancels catastrophically right at a crossing of 1/2;
        // interpolate between two points just outside the band around it.
        let t_cross = t + d / (2.0 * p.d1);
        let half_width = 2.0 * guards.detuning_band / (2.0 * p.d1.abs());
        let (tl, tr) = (t_cross - half_width, t_cross + half_width);
        let (pl, pr) = (pop.eval(tl), pop.eval(tr));
        if (1.0 - 2.0 * pl.value) * (1.0 - 2.0 * pr.value) < 0.0 {
            let bl = rate_b_dot(&pl, &phase.eval(tl));
            let br = rate_b_dot(&pr, &phase.eval(tr));
            bl + (br - bl) * (t - tl) / (tr - tl)
        } else {
            // P approaches 1/2 without crossing it
            rate_b_dot(&p, &phi)
        }
    };
    Ok(phi.d1 + (a * b_dot - b * a_dot) / norm2)
}

fn rate_a_dot(p: &TrajectorySample) -> f64 {
    let pv = p.value;
    let g = (pv * (1.0 - pv)).sqrt();
    if g == 0.0 {
        return 0.0;
    }
    p.d2 / (2.0 * g) - p.d1 * p.d1 * (1.0 - 2.0 * pv) / (4.0 * g * g * g)
}

fn rate_b_dot(p: &TrajectorySample, phi: &TrajectorySample) -> f64 {
    let pv = p.value;
    let g = (pv * (1.0 - pv)).sqrt();
    let d = 1.0 - 2.0 * pv;
    if g == 0.0 {
        return 0.0;
    }
    phi.d2 * g / d + phi.d1 * p.d1 / (2.0 * g) + 2.0 * phi.d1 * g * p.d1 / (d * d)
}

/// Complex envelope ϵ with `ϵ e^{−iω₀t} + c.c. = V₀ sin(ω₀t + Φ + Λ)`.
pub fn rwa_envelope(fs: &FieldSample) -> Complex64 {
    if fs.envelope == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, fs.envelope / 2.0) * Complex64::from_polar(1.0, -fs.modulation_phase)
}

/// Field evaluation bound to one system, trajectory pair and mode.
#[derive(Debug, Clone)]
pub struct FieldSynthesizer<'a> {
    sys: SystemParams,
    pop: &'a PopulationTrajectory,
    phase: &'a PhaseTrajectory,
    mode: SynthesisMode,
    guards: SynthesisGuards,
}

impl<'a> FieldSynthesizer<'a> {
    pub fn new(
        sys: SystemParams,
        pop: &'a PopulationTrajectory,
        phase: &'a PhaseTrajectory,
    ) -> Self {
        Self {
            sys,
            pop,
            phase,
            mode: SynthesisMode::General,
            guards: SynthesisGuards::default(),
        }
    }

    pub fn with_mode(mut self, mode: SynthesisMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_guards(mut self, guards: SynthesisGuards) -> Self {
        self.guards = guards;
        self
    }

    pub fn system(&self) -> &SystemParams {
        &self.sys
    }

    pub fn quadrature(&self, t: f64) -> Result<QuadratureComponents> {
        quadrature_with(
            &self.pop.eval(t),
            &self.phase.eval(t),
            t,
            &self.sys,
            &self.guards,
        )
    }

    pub fn sample(&self, t: f64) -> Result<FieldSample> {
        match self.mode {
            SynthesisMode::General => {
                let p = self.pop.eval(t);
                let phi = self.phase.eval(t);
                let q = quadrature_with(&p, &phi, t, &self.sys, &self.guards)?;
                let detuning = detuning_with(self.pop, self.phase, t, &self.guards)?;
                Ok(assemble(&self.sys, &q, p.d1, phi.value, t, detuning))
            }
            SynthesisMode::ConstantPhase => {
                field_constant_phase(&self.sys, self.pop, self.phase.eval(t).value, t)
            }
            SynthesisMode::ConstantPopulation => {
                field_constant_population(&self.sys, self.pop.eval(t).value, self.phase, t)
            }
        }
    }

    /// Real field only, skipping the detuning.
    pub fn epsilon(&self, t: f64) -> Result<f64> {
        let q = match self.mode {
            SynthesisMode::General => self.quadrature(t)?,
            _ => return self.sample(t).map(|s| s.epsilon),
        };
        let (s, c) = q.theta.sin_cos();
        Ok((2.0 / self.sys.mu()) * (q.a * s + q.b * c))
    }

    /// Complex RWA envelope ϵ(t).
    pub fn envelope(&self, t: f64) -> Result<Complex64> {
        match self.mode {
            SynthesisMode::General => {
                // (1/μ)(B + iA) e^{−iΦ}, the same value as rwa_envelope(sample)
                let phi = self.phase.eval(t);
                let q = quadrature_with(&self.pop.eval(t), &phi, t, &self.sys, &self.guards)?;
                Ok(Complex64::new(q.b, q.a)
                    * Complex64::from_polar(1.0 / self.sys.mu(), -phi.value))
            }
            _ => self.sample(t).map(|s| rwa_envelope(&s)),
        }
    }
}
