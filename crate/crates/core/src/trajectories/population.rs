use super::{check_finite, check_probability, check_window, sech, TrajectorySample};
use crate::system::TimeGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Form {
    Constant {
        value: f64,
    },
    Linear {
        t0: f64,
        start: f64,
        slope: f64,
    },
    /// `c0 + c1 (t - t0) + c2 (t - t0)^2`
    Quadratic {
        t0: f64,
        c0: f64,
        c1: f64,
        c2: f64,
    },
    /// `a tanh(alpha t + beta) + b`
    Tanh {
        a: f64,
        b: f64,
        alpha: f64,
        beta: f64,
    },
    /// `g sech(xi (t - t_peak)) + f`
    Sech {
        g: f64,
        f: f64,
        xi: f64,
        t_peak: f64,
    },
}

/// Ground-level population P(t) = |c_g(t)|².
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTrajectory {
    form: Form,
    initial: f64,
    target: f64,
}

impl PopulationTrajectory {
    pub fn constant(p0: f64) -> Result<Self> {
        check_probability("population.value", p0)?;
        Ok(Self {
            form: Form::Constant { value: p0 },
            initial: p0,
            target: p0,
        })
    }

    /// Straight line from `p_initial` at `t0` to `p_final` at `tf`.
    pub fn linear(p_initial: f64, p_final: f64, t0: f64, tf: f64) -> Result<Self> {
        check_probability("population.initial", p_initial)?;
        check_probability("population.final", p_final)?;
        check_window(t0, tf)?;
        Ok(Self {
            form: Form::Linear {
                t0,
                start: p_initial,
                slope: (p_final - p_initial) / (tf - t0),
            },
            initial: p_initial,
            target: p_final,
        })
    }

    /// Quadratic through `(t0, p_initial)`, `(t_half, 1/2)` and `(tf, p_final)`.
    pub fn quadratic_through_half(
        p_initial: f64,
        p_final: f64,
        t_half: f64,
        t0: f64,
        tf: f64,
    ) -> Result<Self> {
        check_probability("population.initial", p_initial)?;
        check_probability("population.final", p_final)?;
        check_window(t0, tf)?;
        if !(t_half > t0 && t_half < tf) {
            return Err(Error::invalid(
                "population.t_half",
                format!("must lie strictly inside ({t0}, {tf}), got {t_half}"),
            ));
        }
        // Newton divided differences on the shifted abscissae 0 < x1 < x2.
        let x1 = t_half - t0;
        let x2 = tf - t0;
        let s01 = (0.5 - p_initial) / x1;
        let s02 = (p_final - p_initial) / x2;
        let c2 = (s02 - s01) / (x2 - x1);
        let c1 = s01 - c2 * x1;
        Ok(Self {
            form: Form::Quadratic {
                t0,
                c0: p_initial,
                c1,
                c2,
            },
            initial: p_initial,
            target: p_final,
        })
    }

    /// `A tanh(αt + β) + B`, approaching `p_initial` and `p_final`
    /// asymptotically and crossing 1/2 at `t_half`.
    pub fn tanh(p_initial: f64, p_final: f64, alpha: f64, t_half: f64) -> Result<Self> {
        check_probability("population.initial", p_initial)?;
        check_probability("population.final", p_final)?;
        check_finite("population.t_half", t_half)?;
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(
                "population.rate",
                format!("must be positive, got {alpha}"),
            ));
        }
        let a = (p_final - p_initial) / 2.0;
        let b = (p_final + p_initial) / 2.0;
        if a == 0.0 {
            return Err(Error::invalid(
                "population.final",
                "tanh family needs distinct initial and final populations",
            ));
        }
        let gamma = (0.5 - b) / a;
        if !(gamma.abs() < 1.0) {
            return Err(Error::invalid(
                "population",
                format!("1/2 is not strictly between the asymptotes (gamma = {gamma})"),
            ));
        }
        let beta = 0.5 * ((1.0 + gamma) / (1.0 - gamma)).ln() - alpha * t_half;
        Ok(Self {
            form: Form::Tanh { a, b, alpha, beta },
            initial: p_initial,
            target: p_final,
        })
    }

    /// `G sech(ξ(t − t_peak)) + F` with `G = p_peak − p_ends`, `F = p_ends`.
    pub fn sech(p_ends: f64, p_peak: f64, xi: f64, t_peak: f64) -> Result<Self> {
        check_probability("population.ends", p_ends)?;
        check_finite("population.t_peak", t_peak)?;
        if !(p_peak > 0.0 && p_peak < 1.0) || p_peak == 0.5 {
            return Err(Error::invalid(
                "population.peak",
                format!("must lie in (0, 1) and differ from 1/2, got {p_peak}"),
            ));
        }
        if !(xi.is_finite() && xi > 0.0) {
            return Err(Error::invalid(
                "population.rate",
                format!("must be positive, got {xi}"),
            ));
        }
        Ok(Self {
            form: Form::Sech {
                g: p_peak - p_ends,
                f: p_ends,
                xi,
                t_peak,
            },
            initial: p_ends,
            target: p_ends,
        })
    }

    /// Nominal initial population (the asymptote for the tanh and sech forms).
    pub fn nominal_initial(&self) -> f64 {
        self.initial
    }

    /// Nominal final population (the asymptote for the tanh and sech forms).
    pub fn nominal_final(&self) -> f64 {
        self.target
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.form, Form::Constant { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self.form {
            Form::Constant { .. } => "constant",
            Form::Linear { .. } => "linear",
            Form::Quadratic { .. } => "quadratic_through_half",
            Form::Tanh { .. } => "tanh",
            Form::Sech { .. } => "sech",
        }
    }

    /// `(β, γ)` of the tanh form.
    pub fn tanh_offsets(&self) -> Option<(f64, f64)> {
        match self.form {
            Form::Tanh { a, b, beta, .. } => Some((beta, (0.5 - b) / a)),
            _ => None,
        }
    }

    /// Bound on `|P(t) − asymptote|` at `t` for the asymptotic families,
    /// zero for the others. Only meaningful on the side of the asymptote.
    pub fn asymptotic_residual(&self, t: f64) -> f64 {
        match self.form {
            Form::Tanh { a, alpha, beta, .. } => a.abs() * (1.0 - (alpha * t + beta).abs().tanh()),
            Form::Sech { g, xi, t_peak, .. } => g.abs() * sech(xi * (t - t_peak)),
            _ => 0.0,
        }
    }

    pub fn eval(&self, t: f64) -> TrajectorySample {
        match self.form {
            Form::Constant { value } => TrajectorySample::constant(value),
            Form::Linear { t0, start, slope } => {
                TrajectorySample::new(start + slope * (t - t0), slope, 0.0)
            }
            Form::Quadratic { t0, c0, c1, c2 } => {
                let x = t - t0;
                TrajectorySample::new(c0 + x * (c1 + c2 * x), c1 + 2.0 * c2 * x, 2.0 * c2)
            }
            Form::Tanh { a, b, alpha, beta } => {
                let u = alpha * t + beta;
                let th = u.tanh();
                let s2 = 1.0 - th * th;
                TrajectorySample::new(
                    a * th + b,
                    a * alpha * s2,
                    -2.0 * a * alpha * alpha * s2 * th,
                )
            }
            Form::Sech { g, f, xi, t_peak } => {
                let v = xi * (t - t_peak);
                let s = sech(v);
                let th = v.tanh();
                TrajectorySample::new(
                    g * s + f,
                    -g * xi * s * th,
                    g * xi * xi * s * (th * th - s * s),
                )
            }
        }
    }
}

/// Times in `[t0, tf]` where `P(t) = 1/2`, located by a sign scan on `grid`
/// followed by bisection to `tol` (a.u.).
pub fn find_half_crossings(
    traj: &PopulationTrajectory,
    grid: &TimeGrid,
    tol: f64,
) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::invalid(
            "tol",
            format!("must be positive, got {tol}"),
        ));
    }
    let f = |t: f64| traj.eval(t).value - 0.5;
    let mut out: Vec<f64> = Vec::new();
    let mut prev_t = grid.t0();
    let mut prev_f = f(prev_t);
    if prev_f == 0.0 {
        out.push(prev_t);
    }
    for k in 1..=grid.n_steps() {
        let t = grid.time(k);
        let ft = f(t);
        if ft == 0.0 {
            out.push(t);
        } else if prev_f != 0.0 && prev_f.signum() != ft.signum() {
            let (mut lo, mut hi, mut flo) = (prev_t, t, prev_f);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_f = ft;
    }
    Ok(out)
}
