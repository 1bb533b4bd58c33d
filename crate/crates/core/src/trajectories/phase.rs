use super::{check_finite, check_window, sech, TrajectorySample};
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
    /// `a (t - t_vertex)^2 + c`
    QuadraticVertex {
        a: f64,
        c: f64,
        t_vertex: f64,
    },
    /// `chi_k sech(eta_k (t - t_peak)) + sigma_k`, branch 1 for `t < t_peak`.
    SechPair {
        t_peak: f64,
        chi1: f64,
        sigma1: f64,
        eta1: f64,
        chi2: f64,
        sigma2: f64,
        eta2: f64,
    },
    /// `g tanh(chi (t - t_center)) + f`
    Tanh {
        g: f64,
        f: f64,
        chi: f64,
        t_center: f64,
    },
}

/// Relative phase Φ(t) = arg C_g − arg C_e, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrajectory {
    form: Form,
    initial: f64,
    target: f64,
}

/// Quadratic phase with `Φ(t0) = phi_initial`, `Φ(tf) = phi_final` and a
/// stationary point at `t_vertex`.
///
/// A vertex at the midpoint of the window cannot join two different phases;
/// that combination is rejected.
pub fn build_quadratic_vertex(
    phi_initial: f64,
    phi_final: f64,
    t_vertex: f64,
    t0: f64,
    tf: f64,
) -> Result<PhaseTrajectory> {
    check_finite("phase.initial", phi_initial)?;
    check_finite("phase.final", phi_final)?;
    check_window(t0, tf)?;
    if !(t_vertex > t0 && t_vertex < tf) {
        return Err(Error::invalid(
            "phase.t_vertex",
            format!("must lie strictly inside ({t0}, {tf}), got {t_vertex}"),
        ));
    }
    let a = if phi_initial == phi_final {
        0.0
    } else {
        // (tf - tv)^2 - (t0 - tv)^2 = (tf - t0)(tf + t0 - 2 tv)
        let asym = tf + t0 - 2.0 * t_vertex;
        if asym.abs() <= 1e-12 * (tf - t0) {
            return Err(Error::invalid(
                "phase.t_vertex",
                "a vertex at the midpoint cannot join distinct initial and final phases",
            ));
        }
        (phi_final - phi_initial) / ((tf - t0) * asym)
    };
    let c = phi_initial - a * (t0 - t_vertex) * (t0 - t_vertex);
    Ok(PhaseTrajectory {
        form: Form::QuadraticVertex { a, c, t_vertex },
        initial: phi_initial,
        target: phi_final,
    })
}

impl PhaseTrajectory {
    pub fn constant(phi0: f64) -> Result<Self> {
        check_finite("phase.value", phi0)?;
        Ok(Self {
            form: Form::Constant { value: phi0 },
            initial: phi0,
            target: phi0,
        })
    }

    pub fn linear(phi_initial: f64, phi_final: f64, t0: f64, tf: f64) -> Result<Self> {
        check_finite("phase.initial", phi_initial)?;
        check_finite("phase.final", phi_final)?;
        check_window(t0, tf)?;
        Ok(Self {
            form: Form::Linear {
                t0,
                start: phi_initial,
                slope: (phi_final - phi_initial) / (tf - t0),
            },
            initial: phi_initial,
            target: phi_final,
        })
    }

    pub fn quadratic_vertex(
        phi_initial: f64,
        phi_final: f64,
        t_vertex: f64,
        t0: f64,
        tf: f64,
    ) -> Result<Self> {
        build_quadratic_vertex(phi_initial, phi_final, t_vertex, t0, tf)
    }

    /// Two sech lobes joined at `t_peak`, where the phase reaches `phi_peak`
    /// with zero slope.
    ///
    /// The left amplitude is fixed by `Φ(t0) = phi_initial`, the right one by
    /// `Φ(tf) = phi_final` evaluated with the left width `eta1`; the right
    /// width then follows from matching the curvature at `t_peak`.
    pub fn sech_pair(
        phi_initial: f64,
        phi_final: f64,
        phi_peak: f64,
        eta1: f64,
        t_peak: f64,
        t0: f64,
        tf: f64,
    ) -> Result<Self> {
        check_finite("phase.initial", phi_initial)?;
        check_finite("phase.final", phi_final)?;
        check_finite("phase.peak", phi_peak)?;
        check_window(t0, tf)?;
        if !(eta1.is_finite() && eta1 > 0.0) {
            return Err(Error::invalid(
                "phase.rate",
                format!("must be positive, got {eta1}"),
            ));
        }
        if !(t_peak > t0 && t_peak < tf) {
            return Err(Error::invalid(
                "phase.t_peak",
                format!("must lie strictly inside ({t0}, {tf}), got {t_peak}"),
            ));
        }
        let chi1 = (phi_initial - phi_peak) / (sech(eta1 * (t0 - t_peak)) - 1.0);
        let chi2 = (phi_final - phi_peak) / (sech(eta1 * (tf - t_peak)) - 1.0);
        if !(chi1 * chi2 > 0.0) || !chi1.is_finite() || !chi2.is_finite() {
            return Err(Error::invalid(
                "phase.peak",
                format!(
                    "peak must lie strictly beyond both endpoint phases on the same side \
                     (chi1 = {chi1}, chi2 = {chi2})"
                ),
            ));
        }
        let eta2 = eta1 * (chi1 / chi2).sqrt();
        Ok(Self {
            form: Form::SechPair {
                t_peak,
                chi1,
                sigma1: phi_peak - chi1,
                eta1,
                chi2,
                sigma2: phi_peak - chi2,
                eta2,
            },
            initial: phi_initial,
            target: phi_final,
        })
    }

    /// `G tanh(χ(t − t_center)) + F` joining `phi_initial` to `phi_final`
    /// asymptotically, with `Φ(t_center) = (phi_initial + phi_final)/2`.
    pub fn tanh(phi_initial: f64, phi_final: f64, chi: f64, t_center: f64) -> Result<Self> {
        check_finite("phase.initial", phi_initial)?;
        check_finite("phase.final", phi_final)?;
        check_finite("phase.t_center", t_center)?;
        if !(chi.is_finite() && chi > 0.0) {
            return Err(Error::invalid(
                "phase.rate",
                format!("must be positive, got {chi}"),
            ));
        }
        Ok(Self {
            form: Form::Tanh {
                g: (phi_final - phi_initial) / 2.0,
                f: (phi_final + phi_initial) / 2.0,
                chi,
                t_center,
            },
            initial: phi_initial,
            target: phi_final,
        })
    }

    pub fn nominal_initial(&self) -> f64 {
        self.initial
    }

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
            Form::QuadraticVertex { .. } => "quadratic_vertex",
            Form::SechPair { .. } => "sech_pair",
            Form::Tanh { .. } => "tanh",
        }
    }

    /// Leading coefficient of the quadratic-vertex form.
    pub fn vertex_curvature(&self) -> Option<f64> {
        match self.form {
            Form::QuadraticVertex { a, .. } => Some(a),
            _ => None,
        }
    }

    /// `(chi1, eta1, chi2, eta2)` of the sech-pair form.
    pub fn sech_pair_coefficients(&self) -> Option<(f64, f64, f64, f64)> {
        match self.form {
            Form::SechPair {
                chi1,
                eta1,
                chi2,
                eta2,
                ..
            } => Some((chi1, eta1, chi2, eta2)),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> TrajectorySample {
        match self.form {
            Form::Constant { value } => TrajectorySample::constant(value),
            Form::Linear { t0, start, slope } => {
                TrajectorySample::new(start + slope * (t - t0), slope, 0.0)
            }
            Form::QuadraticVertex { a, c, t_vertex } => {
                let x = t - t_vertex;
                TrajectorySample::new(a * x * x + c, 2.0 * a * x, 2.0 * a)
            }
            Form::SechPair {
                t_peak,
                chi1,
                sigma1,
                eta1,
                chi2,
                sigma2,
                eta2,
            } => {
                let (chi, sigma, eta) = if t < t_peak {
                    (chi1, sigma1, eta1)
                } else {
                    (chi2, sigma2, eta2)
                };
                let v = eta * (t - t_peak);
                let s = sech(v);
                let th = v.tanh();
                TrajectorySample::new(
                    chi * s + sigma,
                    -chi * eta * s * th,
                    chi * eta * eta * s * (th * th - s * s),
                )
            }
            Form::Tanh {
                g,
                f,
                chi,
                t_center,
            } => {
                let th = (chi * (t - t_center)).tanh();
                let s2 = 1.0 - th * th;
                TrajectorySample::new(g * th + f, g * chi * s2, -2.0 * g * chi * chi * s2 * th)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{fs_to_au, per_fs_to_au};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    #[test]
    fn quadratic_vertex_values() {
        // built directly in fs so the curvature reads in rad/fs^2
        let q = build_quadratic_vertex(0.0, FRAC_PI_4, 60.0, 0.0, 100.0).unwrap();
        assert_relative_eq!(
            q.vertex_curvature().unwrap(),
            -3.927e-4,
            max_relative = 1e-4
        );
        let v = q.eval(60.0);
        assert_relative_eq!(v.value, 1.4137, max_relative = 1e-4);
        assert_eq!(v.d1, 0.0);
        assert_relative_eq!(q.eval(0.0).value, 0.0, epsilon = 1e-15);
        assert_relative_eq!(q.eval(100.0).value, FRAC_PI_4, epsilon = 1e-15);
    }

    #[test]
    fn quadratic_vertex_midpoint_degeneracy() {
        assert!(build_quadratic_vertex(0.0, FRAC_PI_4, 50.0, 0.0, 100.0).is_err());
        let flat = build_quadratic_vertex(0.3, 0.3, 50.0, 0.0, 100.0).unwrap();
        assert_eq!(flat.vertex_curvature(), Some(0.0));
        assert_eq!(flat.eval(17.0).value, 0.3);
        // the same degeneracy in atomic units
        let (tf, tv) = (fs_to_au(100.0), fs_to_au(50.0));
        assert!(build_quadratic_vertex(0.0, FRAC_PI_4, tv, 0.0, tf).is_err());
    }

    #[test]
    fn tanh_midpoint() {
        let p = PhaseTrajectory::tanh(0.0, FRAC_PI_8, per_fs_to_au(0.08), fs_to_au(100.0)).unwrap();
        assert_relative_eq!(p.eval(fs_to_au(100.0)).value, PI / 16.0, epsilon = 1e-15);
    }

    #[test]
    fn sech_pair_boundary_and_peak() {
        let (t0, tf, tp) = (0.0, fs_to_au(200.0), fs_to_au(100.0));
        let eta1 = per_fs_to_au(1.65 * 0.04);
        let peak = 1.4 * FRAC_PI_4;
        let p = PhaseTrajectory::sech_pair(0.0, FRAC_PI_4, peak, eta1, tp, t0, tf).unwrap();
        assert_relative_eq!(p.eval(t0).value, 0.0, epsilon = 1e-12);
        let at_peak = p.eval(tp);
        assert_relative_eq!(at_peak.value, peak, epsilon = 1e-12);
        assert_eq!(at_peak.d1, 0.0);
        // the right branch uses eta2 != eta1, so the end point is only met up to
        // the difference of the two sech tails
        let (_, _, chi2, eta2) = p.sech_pair_coefficients().unwrap();
        let residual = chi2.abs() * (sech(eta2 * (tf - tp)) - sech(eta1 * (tf - tp))).abs();
        assert!((p.eval(tf).value - FRAC_PI_4).abs() <= residual * (1.0 + 1e-9) + 1e-15);
    }

    #[test]
    fn sech_pair_rejects_peak_between_endpoints() {
        let r = PhaseTrajectory::sech_pair(0.0, 1.0, 0.5, 0.01, 50.0, 0.0, 100.0);
        assert!(r.is_err());
    }
}
