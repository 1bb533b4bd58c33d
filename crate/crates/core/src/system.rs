use crate::units::ev_to_hartree;
use crate::{Error, Result};

/// Constants of the driven two-level system, in atomic units.
///
/// The ground level sits at zero energy and the excited level at `omega0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    omega0: f64,
    mu: f64,
}

impl SystemParams {
    pub fn new(omega0: f64, mu: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::invalid(
                "omega0",
                format!("must be positive, got {omega0}"),
            ));
        }
        if !mu.is_finite() || mu == 0.0 {
            return Err(Error::invalid(
                "mu",
                format!("must be finite and nonzero, got {mu}"),
            ));
        }
        Ok(Self { omega0, mu })
    }

    /// Resonance frequency (hartree).
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Transition dipole projection (a.u.).
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Carrier period 2π/ω₀ in a.u. time.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega0
    }
}

/// Builds system parameters from a gap in eV and a dipole in a.u.
pub fn make_system(omega0_ev: f64, mu_au: f64) -> Result<SystemParams> {
    if !(omega0_ev > 0.0) {
        return Err(Error::invalid(
            "omega0_ev",
            format!("must be positive, got {omega0_ev}"),
        ));
    }
    SystemParams::new(ev_to_hartree(omega0_ev), mu_au)
}

/// Sodium 3s -> 3p: ω₀ = 2.1 eV, μ = 2.479 a.u.
pub fn sodium() -> SystemParams {
    make_system(2.1, 2.479).expect("valid constants")
}

/// Uniform time grid with `n_steps` intervals on `[t0, tf]` (a.u.).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    tf: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, tf: f64, n_steps: usize) -> Result<Self> {
        if !(t0.is_finite() && tf.is_finite() && tf > t0) {
            return Err(Error::invalid(
                "time grid",
                format!("need tf > t0, got [{t0}, {tf}]"),
            ));
        }
        if n_steps < 2 {
            return Err(Error::invalid(
                "n_steps",
                format!("must be >= 2, got {n_steps}"),
            ));
        }
        Ok(Self { t0, tf, n_steps })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn tf(&self) -> f64 {
        self.tf
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn span(&self) -> f64 {
        self.tf - self.t0
    }

    pub fn step(&self) -> f64 {
        self.span() / self.n_steps as f64
    }

    /// Time of grid point `k` (`0..=n_steps`). The last point is exactly `tf`.
    pub fn time(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.tf
        } else {
            self.t0 + self.span() * (k as f64 / self.n_steps as f64)
        }
    }

    /// All `n_steps + 1` grid points.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |k| self.time(k))
    }

    /// The same interval refined so that every interval is split `factor` times.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            n_steps: self.n_steps * factor.max(1),
            ..*self
        }
    }
}
