//! Interaction-picture propagation of the two-level amplitudes.
//!
//! Two drives are supported: the RWA equations driven by a complex envelope
//! ϵ(t), and the full equations driven by the real field ε(t) with the
//! counter-rotating terms kept. Both are stepped with classical fixed-step
//! fourth-order Runge–Kutta.

use std::f64::consts::TAU;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::system::{SystemParams, TimeGrid};
use crate::{Error, Result};

/// Minimum full-field steps per carrier period.
pub const FULL_STEPS_PER_PERIOD: usize = 50;
/// Minimum RWA steps over the whole window.
pub const RWA_MIN_STEPS: usize = 200;

/// Amplitudes `(C_g, C_e)` in the interaction picture. Also used for their
/// time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState {
    pub cg: Complex64,
    pub ce: Complex64,
}

impl QuantumState {
    pub const fn new(cg: Complex64, ce: Complex64) -> Self {
        Self { cg, ce }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.cg.norm_sqr() + self.ce.norm_sqr()
    }

    pub fn population_g(&self) -> f64 {
        self.cg.norm_sqr()
    }

    pub fn population_e(&self) -> f64 {
        self.ce.norm_sqr()
    }

    /// arg C_g − arg C_e, wrapped to (−π, π], or `None` if either amplitude vanishes.
    pub fn relative_phase(&self) -> Option<f64> {
        const FLOOR: f64 = 1e-12;
        if self.cg.norm() <= FLOOR || self.ce.norm() <= FLOOR {
            return None;
        }
        Some((self.cg * self.ce.conj()).arg())
    }
}

impl Add for QuantumState {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.cg + rhs.cg, self.ce + rhs.ce)
    }
}

impl Mul<f64> for QuantumState {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.cg * rhs, self.ce * rhs)
    }
}

/// State with `|C_g|² = p_initial`, relative phase `phi_initial` and `arg C_e = 0`.
pub fn init_state(p_initial: f64, phi_initial: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&p_initial) {
        return Err(Error::invalid(
            "initial population",
            format!("must lie in [0, 1], got {p_initial}"),
        ));
    }
    Ok(QuantumState::new(
        Complex64::from_polar(p_initial.sqrt(), phi_initial),
        Complex64::new((1.0 - p_initial).sqrt(), 0.0),
    ))
}

/// RWA right-hand side with resonant carrier.
pub fn rwa_derivative(s: &QuantumState, envelope: Complex64, sys: &SystemParams) -> QuantumState {
    let i_mu = Complex64::new(0.0, sys.mu());
    QuantumState::new(i_mu * envelope.conj() * s.ce, i_mu * envelope * s.cg)
}

/// Full right-hand side with the real field `eps` at time `t`.
pub fn full_derivative(s: &QuantumState, t: f64, eps: f64, sys: &SystemParams) -> QuantumState {
    let rot = Complex64::from_polar(1.0, -sys.omega0() * t);
    let k = Complex64::new(0.0, sys.mu() * eps);
    QuantumState::new(k * rot * s.ce, k * rot.conj() * s.cg)
}

/// Source of the driving field.
pub enum Drive<'a> {
    /// Complex RWA envelope ϵ(t).
    Rwa(&'a dyn Fn(f64) -> Result<Complex64>),
    /// Real field ε(t).
    Full(&'a dyn Fn(f64) -> Result<f64>),
}

impl Drive<'_> {
    fn derivative(&self, s: &QuantumState, t: f64, sys: &SystemParams) -> Result<QuantumState> {
        match self {
            Drive::Rwa(env) => Ok(rwa_derivative(s, env(t)?, sys)),
            Drive::Full(field) => Ok(full_derivative(s, t, field(t)?, sys)),
        }
    }

    /// Largest step allowed for this drive on `grid`.
    pub fn max_step(&self, sys: &SystemParams, grid: &TimeGrid) -> f64 {
        match self {
            Drive::Rwa(_) => grid.span() / RWA_MIN_STEPS as f64,
            Drive::Full(_) => sys.period() / FULL_STEPS_PER_PERIOD as f64,
        }
    }
}

/// Sampled evolution and its observables.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub states: Vec<QuantumState>,
    pub populations_g: Vec<f64>,
    /// Unwrapped relative phase; NaN where it is undefined.
    pub relative_phase: Vec<f64>,
    /// `| |C_g|² + |C_e|² − 1 |`.
    pub norm_residual: Vec<f64>,
}

impl TimeSeries {
    pub fn from_states(times: Vec<f64>, states: Vec<QuantumState>) -> Self {
        assert_eq!(times.len(), states.len());
        let populations_g = states.iter().map(QuantumState::population_g).collect();
        let norm_residual = states.iter().map(|s| (s.norm_sqr() - 1.0).abs()).collect();
        let relative_phase = unwrap_phases(states.iter().map(QuantumState::relative_phase))
            .into_iter()
            .map(|p| p.unwrap_or(f64::NAN))
            .collect();
        Self {
            times,
            states,
            populations_g,
            relative_phase,
            norm_residual,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_norm_residual(&self) -> f64 {
        self.norm_residual.iter().copied().fold(0.0, f64::max)
    }

    pub fn last(&self) -> Option<(f64, &QuantumState)> {
        Some((*self.times.last()?, self.states.last()?))
    }
}

/// Continues a wrapped phase record by multiples of 2π so that successive
/// defined samples differ by less than π. Gaps are carried through.
pub fn unwrap_phases(wrapped: impl IntoIterator<Item = Option<f64>>) -> Vec<Option<f64>> {
    let mut offset = 0.0;
    let mut last: Option<f64> = None;
    wrapped
        .into_iter()
        .map(|p| {
            let p = p?;
            let mut v = p + offset;
            if let Some(prev) = last {
                let jumps = ((v - prev) / TAU).round();
                offset -= jumps * TAU;
                v -= jumps * TAU;
            }
            last = Some(v);
            Some(v)
        })
        .collect()
}

/// Relative phase `arg C_g − arg C_e` of each sample, unwrapped; `None` marks
/// samples where an amplitude vanishes.
pub fn relative_phase_series(series: &TimeSeries) -> Vec<Option<f64>> {
    unwrap_phases(series.states.iter().map(QuantumState::relative_phase))
}

/// Residual of the real-field phase relation `φ̇_e c_e² − φ̇_g c_g²`, with
/// the individual phase rates taken by finite differences on the sample
/// times (central inside, second-order one-sided at the ends).
pub fn phase_relation_residual(series: &TimeSeries) -> Vec<f64> {
    let n = series.len();
    if n < 3 {
        return vec![0.0; n];
    }
    let unwrap = |f: fn(&QuantumState) -> Complex64| -> Vec<f64> {
        unwrap_phases(series.states.iter().map(|s| {
            let c = f(s);
            (c.norm() > 1e-12).then(|| c.arg())
        }))
        .into_iter()
        .map(|p| p.unwrap_or(f64::NAN))
        .collect()
    };
    let phi_g = unwrap(|s| s.cg);
    let phi_e = unwrap(|s| s.ce);
    let rate_g = derivative(&series.times, &phi_g);
    let rate_e = derivative(&series.times, &phi_e);
    series
        .states
        .iter()
        .zip(rate_g.iter().zip(&rate_e))
        .map(|(s, (&dg, &de))| {
            let r = de * s.population_e() - dg * s.population_g();
            if r.is_nan() {
                0.0
            } else {
                r
            }
        })
        .collect()
}

fn derivative(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    (0..n)
        .map(|k| {
            if k == 0 {
                let (h1, h2) = (t[1] - t[0], t[2] - t[1]);
                // three-point forward difference on possibly uneven spacing
                -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1]
                    - h1 / (h2 * (h1 + h2)) * y[2]
            } else if k == n - 1 {
                let (h1, h2) = (t[n - 2] - t[n - 3], t[n - 1] - t[n - 2]);
                h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2]
                    + (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1]
            } else {
                (y[k + 1] - y[k - 1]) / (t[k + 1] - t[k - 1])
            }
        })
        .collect()
}

/// Integrates from `s0` over every point of `grid`.
pub fn integrate(
    sys: &SystemParams,
    drive: &Drive<'_>,
    s0: QuantumState,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    integrate_strided(sys, drive, s0, grid, 1)
}

/// Integrates over `grid`, recording every `stride`-th point (and the last).
pub fn integrate_strided(
    sys: &SystemParams,
    drive: &Drive<'_>,
    s0: QuantumState,
    grid: &TimeGrid,
    stride: usize,
) -> Result<TimeSeries> {
    let stride = stride.max(1);
    let h = grid.step();
    let max_step = drive.max_step(sys, grid);
    if h > max_step * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge {
            step: h,
            max_step,
            required_steps: (grid.span() / max_step).ceil() as usize,
        });
    }

    let capacity = grid.n_steps() / stride + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut s = s0;
    times.push(grid.t0());
    states.push(s);
    for k in 0..grid.n_steps() {
        let t = grid.time(k);
        let t_next = grid.time(k + 1);
        let dt = t_next - t;
        let half = t + 0.5 * dt;
        let k1 = drive.derivative(&s, t, sys)?;
        let k2 = drive.derivative(&(s + k1 * (0.5 * dt)), half, sys)?;
        let k3 = drive.derivative(&(s + k2 * (0.5 * dt)), half, sys)?;
        let k4 = drive.derivative(&(s + k3 * dt), t_next, sys)?;
        s = s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        if (k + 1) % stride == 0 || k + 1 == grid.n_steps() {
            times.push(t_next);
            states.push(s);
        }
    }
    Ok(TimeSeries::from_states(times, states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::sodium;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn initial_states() {
        let s = init_state(1.0, 0.0).unwrap();
        assert_eq!(s.cg, c(1.0, 0.0));
        assert_eq!(s.ce, c(0.0, 0.0));

        let s = init_state(0.5, FRAC_PI_2).unwrap();
        assert_relative_eq!(s.cg.re, 0.0, epsilon = 1e-16);
        assert_relative_eq!(s.cg.im, FRAC_1_SQRT_2, epsilon = 1e-16);
        assert_relative_eq!(s.ce.re, FRAC_1_SQRT_2, epsilon = 1e-16);

        assert_relative_eq!(
            init_state(0.3, 0.0).unwrap().population_g(),
            0.3,
            epsilon = 1e-15
        );
        assert!(init_state(1.1, 0.0).is_err());
        assert!(init_state(-0.1, 0.0).is_err());
    }

    #[test]
    fn rwa_derivative_examples() {
        let sys = sodium();
        let s = init_state(0.3, 0.4).unwrap();
        let d = rwa_derivative(&s, c(0.0, 0.0), &sys);
        assert_eq!(d.cg, c(0.0, 0.0));
        assert_eq!(d.ce, c(0.0, 0.0));

        let env = c(0.2, -0.1);
        let d = rwa_derivative(&init_state(1.0, 0.0).unwrap(), env, &sys);
        assert_eq!(d.cg, c(0.0, 0.0));
        assert_relative_eq!((d.ce - c(0.0, sys.mu()) * env).norm(), 0.0, epsilon = 1e-15);

        let d = rwa_derivative(&s, env, &sys);
        let dn = (s.cg.conj() * d.cg + s.ce.conj() * d.ce).re;
        assert!(dn.abs() < 1e-15);
    }

    #[test]
    fn full_derivative_preserves_norm_and_vanishes_without_field() {
        let sys = sodium();
        let s = init_state(0.7, 1.1).unwrap();
        let d = full_derivative(&s, 3.0, 0.0, &sys);
        assert_eq!(d.cg.norm(), 0.0);
        let d = full_derivative(&s, 3.0, 0.01, &sys);
        assert!((s.cg.conj() * d.cg + s.ce.conj() * d.ce).re.abs() < 1e-16);
    }

    #[test]
    fn full_coupling_averages_to_rwa() {
        // ε = V₀ sin(ω₀t) has RWA envelope iV₀/2, so over one period the
        // mean of d(ce)/dt for cg = 1 is iμ·(iV₀/2) = −μV₀/2.
        let sys = sodium();
        let v0 = 1e-4;
        let s = init_state(1.0, 0.0).unwrap();
        let n = 10_000;
        let period = sys.period();
        let mean: Complex64 = (0..n)
            .map(|k| {
                let t = period * (k as f64 + 0.5) / n as f64;
                full_derivative(&s, t, v0 * (sys.omega0() * t).sin(), &sys).ce
            })
            .sum::<Complex64>()
            / n as f64;
        assert_relative_eq!(mean.re, -sys.mu() * v0 / 2.0, max_relative = 1e-6);
        assert!(mean.im.abs() < 1e-10);
    }

    #[test]
    fn free_evolution_is_stationary() {
        let sys = sodium();
        let grid = TimeGrid::new(0.0, 4000.0, 400).unwrap();
        let zero = |_t: f64| Ok(c(0.0, 0.0));
        let s0 = init_state(0.3, 0.0).unwrap();
        let ts = integrate(&sys, &Drive::Rwa(&zero), s0, &grid).unwrap();
        assert_eq!(ts.len(), 401);
        assert!(ts.populations_g.iter().all(|&p| (p - 0.3).abs() < 1e-15));
        assert!(ts.relative_phase.iter().all(|&p| p.abs() < 1e-15));
        assert!(phase_relation_residual(&ts).iter().all(|r| r.abs() < 1e-15));
    }

    #[test]
    fn step_precondition() {
        let sys = sodium();
        let zero = |_t: f64| Ok(0.0);
        let grid = TimeGrid::new(0.0, 4000.0, 400).unwrap();
        let err = integrate(
            &sys,
            &Drive::Full(&zero),
            init_state(1.0, 0.0).unwrap(),
            &grid,
        )
        .unwrap_err();
        match err {
            Error::StepTooLarge { required_steps, .. } => {
                assert_eq!(
                    required_steps,
                    (4000.0 / (sys.period() / 50.0)).ceil() as usize
                )
            }
            e => panic!("unexpected {e}"),
        }
        let rwa_zero = |_t: f64| Ok(c(0.0, 0.0));
        let coarse = TimeGrid::new(0.0, 4000.0, 100).unwrap();
        assert!(integrate(
            &sys,
            &Drive::Rwa(&rwa_zero),
            init_state(1.0, 0.0).unwrap(),
            &coarse
        )
        .is_err());
    }

    #[test]
    fn strided_recording_keeps_last_point() {
        let sys = sodium();
        let zero = |_t: f64| Ok(c(0.0, 0.0));
        let grid = TimeGrid::new(0.0, 1000.0, 1000).unwrap();
        let ts = integrate_strided(
            &sys,
            &Drive::Rwa(&zero),
            init_state(0.5, 0.0).unwrap(),
            &grid,
            3,
        )
        .unwrap();
        assert_eq!(*ts.times.last().unwrap(), 1000.0);
        assert_eq!(ts.times[1], 3.0);
        assert!(ts.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn relative_phase_examples() {
        let h = FRAC_1_SQRT_2;
        let ts = TimeSeries::from_states(
            vec![0.0, 1.0],
            vec![
                QuantumState::new(c(h, 0.0), c(h, 0.0)),
                QuantumState::new(Complex64::from_polar(h, FRAC_PI_4), c(h, 0.0)),
            ],
        );
        let ph = relative_phase_series(&ts);
        assert_eq!(ph[0], Some(0.0));
        assert_relative_eq!(ph[1].unwrap(), FRAC_PI_4, epsilon = 1e-15);

        let gap =
            TimeSeries::from_states(vec![0.0], vec![QuantumState::new(c(1.0, 0.0), c(0.0, 0.0))]);
        assert_eq!(relative_phase_series(&gap), vec![None]);
    }

    #[test]
    fn unwrapping_crosses_the_branch_cut() {
        let wrapped: Vec<Option<f64>> = (0..40)
            .map(|k| {
                let p = 0.3 * k as f64;
                Some((p + PI).rem_euclid(TAU) - PI)
            })
            .collect();
        let un = unwrap_phases(wrapped);
        for (k, p) in un.iter().enumerate() {
            assert_relative_eq!(p.unwrap(), 0.3 * k as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn equal_populations_with_moving_phase_break_the_relation() {
        let h = FRAC_1_SQRT_2;
        let w = 1e-3;
        let times: Vec<f64> = (0..50).map(|k| k as f64).collect();
        let states = times
            .iter()
            .map(|&t| QuantumState::new(Complex64::from_polar(h, w * t), c(h, 0.0)))
            .collect();
        let ts = TimeSeries::from_states(times, states);
        let r = phase_relation_residual(&ts);
        assert!(
            r.iter().all(|&x| (x + 0.5 * w).abs() < 1e-12),
            "{:?}",
            &r[..3]
        );
    }
}
