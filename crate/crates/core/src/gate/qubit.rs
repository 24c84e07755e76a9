use core::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::rand_core::RngCore;
use rand_distr::{Distribution, Uniform};

use crate::error::{Error, Result};
use crate::noise::NoiseModel;

/// Dual-rail qubit `a0|0⟩ + a1|1⟩`, where `|1⟩` is the rail that interacts
/// with the probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitAmplitudes {
    pub a0: Complex64,
    pub a1: Complex64,
}

impl QubitAmplitudes {
    pub const NORM_TOLERANCE: f64 = 1e-12;

    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let norm = a0.norm_sqr() + a1.norm_sqr();
        if !((norm - 1.0).abs() <= Self::NORM_TOLERANCE) {
            return Err(Error::InvalidParameter {
                name: "qubit",
                reason: "|a0|^2 + |a1|^2 must equal 1",
            });
        }
        Ok(Self { a0, a1 })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(a0: Complex64, a1: Complex64) -> Result<Self> {
        let norm = libm::sqrt(a0.norm_sqr() + a1.norm_sqr());
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter {
                name: "qubit",
                reason: "amplitudes must be finite and not both zero",
            });
        }
        Ok(Self {
            a0: a0 / norm,
            a1: a1 / norm,
        })
    }

    pub fn zero() -> Self {
        Self {
            a0: Complex64::new(1.0, 0.0),
            a1: Complex64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Self {
            a0: Complex64::new(0.0, 0.0),
            a1: Complex64::new(1.0, 0.0),
        }
    }

    /// Uniform on the Bloch sphere: `|a1|² ~ U[0, 1]` with a uniform relative phase.
    pub fn haar<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let unit = Uniform::new(0.0, 1.0).expect("valid range");
        let x: f64 = unit.sample(rng);
        let phi = TAU * unit.sample(rng);
        Self {
            a0: Complex64::new(libm::sqrt(1.0 - x), 0.0),
            a1: Complex64::from_polar(libm::sqrt(x), phi),
        }
    }

    pub fn amplitude(&self, bit: u8) -> Complex64 {
        if bit == 0 {
            self.a0
        } else {
            self.a1
        }
    }
}

/// Probe amplitude, peak phase and Fock cutoff for one gate evaluation.
///
/// The probe amplitude is real and non-negative; a global probe phase does not
/// change any success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParams {
    pub alpha_p: f64,
    pub theta: f64,
    pub n_max: usize,
    pub tail_tol: f64,
}

impl GateParams {
    pub const DEFAULT_TAIL_TOL: f64 = 1e-9;

    /// Chooses `n_max` so that a Poisson distribution with the largest likely
    /// displaced-probe mean has tail mass below `tail_tol` beyond it.
    pub fn new(alpha_p: f64, theta: f64, model: &NoiseModel, tail_tol: f64) -> Result<Self> {
        if !(alpha_p.is_finite() && alpha_p >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha_p",
                reason: "must be finite and non-negative",
            });
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: "must be finite",
            });
        }
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(Error::InvalidParameter {
                name: "tail_tol",
                reason: "must lie in (0, 1)",
            });
        }
        let phi_max = (libm::fabs(theta) + 6.0 * model.probe_std()).min(core::f64::consts::PI);
        let amp = 2.0 * alpha_p * libm::sin(0.5 * phi_max);
        let mean = amp * amp;
        Ok(Self {
            alpha_p,
            theta,
            n_max: photon_cutoff(mean, tail_tol),
            tail_tol,
        })
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max.max(1);
        self
    }
}

/// `1 + ceil(m + 10 sqrt(m))`, raised until the Chernoff bound on the Poisson
/// tail `P(N > n)` drops below `tail_tol`.
fn photon_cutoff(mean: f64, tail_tol: f64) -> usize {
    let mut n = 1 + libm::ceil(mean + 10.0 * libm::sqrt(mean)) as usize;
    if mean == 0.0 {
        return n;
    }
    loop {
        let nf = n as f64;
        // ln[e^{-m} (e m / n)^n]
        let log_bound = -mean + nf * (1.0 + libm::log(mean / nf));
        if log_bound < libm::log(tail_tol) {
            return n;
        }
        n += 1 + n / 16;
    }
}
