//! Gaussian phase-noise statistics.
//!
//! The non-commuting signal/probe noise operators are replaced by classical
//! zero-mean Gaussians plus the deterministic phase factor returned by
//! [`joint_phase_expectation`]. Per-sample random streams are ChaCha8 streams
//! keyed by `(seed, index)`, so results do not depend on evaluation order.

use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::quadrature::Quadrature;

/// Truncation of the Gaussian average in [`f0_exact`], in standard deviations.
const GAUSS_SUPPORT: f64 = 8.0;

/// Phase-noise statistics seen by the parity gate.
///
/// Alice's and Bob's cells each contribute variance `sigma2_cell`; the probe
/// passes both cells, so `sigma2_probe = 2 * sigma2_cell`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub theta: f64,
    pub sigma2_cell: f64,
    pub sigma2_probe: f64,
}

impl NoiseModel {
    pub fn from_cell_variance(theta: f64, sigma2_cell: f64) -> Result<Self> {
        check_non_negative("theta", theta)?;
        check_non_negative("sigma2_cell", sigma2_cell)?;
        Ok(Self {
            theta,
            sigma2_cell,
            sigma2_probe: 2.0 * sigma2_cell,
        })
    }

    /// Builds the model from the probe variance directly, as in sweeps where
    /// `σ_P²` is varied independently of `θ`.
    pub fn from_probe_variance(theta: f64, sigma2_probe: f64) -> Result<Self> {
        check_non_negative("sigma2_probe", sigma2_probe)?;
        Self::from_cell_variance(theta, 0.5 * sigma2_probe)
    }

    pub fn from_kernel(summary: &crate::kernel::KernelSummary) -> Result<Self> {
        Self::from_cell_variance(summary.theta, summary.sigma2_cell)
    }

    pub fn probe_std(&self) -> f64 {
        libm::sqrt(self.sigma2_probe)
    }
}

fn check_non_negative(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be finite and non-negative",
        })
    }
}

/// One draw of the three independent phase noises (radians).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseSample {
    pub xi_a: f64,
    pub xi_b: f64,
    pub xi_p: f64,
}

impl NoiseSample {
    pub const ZERO: Self = Self {
        xi_a: 0.0,
        xi_b: 0.0,
        xi_p: 0.0,
    };
}

/// Draws `xi_a, xi_b ~ N(0, σ²)` and `xi_p ~ N(0, 2σ²)`.
pub fn sample_noise<R: RngCore + ?Sized>(model: &NoiseModel, rng: &mut R) -> NoiseSample {
    let cell = libm::sqrt(model.sigma2_cell);
    let probe = libm::sqrt(model.sigma2_probe);
    let mut draw = |scale: f64| {
        let z: f64 = StandardNormal.sample(rng);
        scale * z
    };
    let xi_a = draw(cell);
    let xi_b = draw(cell);
    let xi_p = draw(probe);
    NoiseSample { xi_a, xi_b, xi_p }
}

/// Independent random stream for sample `index` under master `seed`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `⟨e^{iλξ_S} e^{iηξ_P}⟩` for the ordered, non-commuting noise operators:
/// `e^{−iληθ/2} · e^{−(λ²+η²)σ²/2}`.
pub fn joint_phase_expectation(lambda: f64, eta: f64, theta: f64, sigma2: f64) -> Complex64 {
    let magnitude = libm::exp(-0.5 * (lambda * lambda + eta * eta) * sigma2);
    Complex64::from_polar(magnitude, -0.5 * lambda * eta * theta)
}

/// Small-angle Gaussian-averaged vacuum overlap
/// `f₀ = exp(−θ²|α|²/(1+2σ_P²|α|²)) / sqrt(1+2σ_P²|α|²)`.
pub fn f0_closed(alpha_p: f64, theta_eff: f64, sigma2_probe: f64) -> f64 {
    let a2 = alpha_p * alpha_p;
    let q = 1.0 + 2.0 * sigma2_probe * a2;
    libm::exp(-theta_eff * theta_eff * a2 / q) / libm::sqrt(q)
}

/// `⟨|⟨0|α(e^{i(ξ+θ)}−1)⟩|²⟩_ξ = ∫ N(ξ; 0, σ_P²) exp(−2|α|²(1−cos(ξ+θ))) dξ`
/// without the small-angle expansion.
pub fn f0_exact(alpha_p: f64, theta_eff: f64, sigma2_probe: f64) -> Result<f64> {
    check_non_negative("alpha_p", alpha_p)?;
    check_non_negative("sigma2_probe", sigma2_probe)?;
    let a2 = alpha_p * alpha_p;
    let overlap = |phi: f64| {
        let s = libm::sin(0.5 * phi);
        libm::exp(-4.0 * a2 * s * s)
    };
    if sigma2_probe == 0.0 {
        return Ok(overlap(theta_eff));
    }
    let sigma = libm::sqrt(sigma2_probe);
    let lo = -GAUSS_SUPPORT * sigma;
    let hi = GAUSS_SUPPORT * sigma;

    // the overlap peaks wherever ξ + θ is a multiple of 2π
    let mut points = alloc::vec![lo, hi];
    let k_lo = libm::ceil((lo + theta_eff) / TAU) as i64;
    let k_hi = libm::floor((hi + theta_eff) / TAU) as i64;
    for k in k_lo..=k_hi {
        let peak = k as f64 * TAU - theta_eff;
        if peak > lo && peak < hi {
            points.push(peak);
        }
    }
    points.sort_by(f64::total_cmp);

    let norm = 1.0 / libm::sqrt(2.0 * PI * sigma2_probe);
    let est = Quadrature::with_rel_tol(1e-10).integrate(
        |xi: f64| norm * libm::exp(-0.5 * xi * xi / sigma2_probe) * overlap(xi + theta_eff),
        &points,
    )?;
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_noise_is_zero() {
        let m = NoiseModel::from_cell_variance(0.1, 0.0).unwrap();
        let mut rng = sample_stream(7, 3);
        let s = sample_noise(&m, &mut rng);
        assert_eq!(s, NoiseSample::ZERO);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let m = NoiseModel::from_cell_variance(0.0, 0.01).unwrap();
        let a = sample_noise(&m, &mut sample_stream(1, 5));
        let b = sample_noise(&m, &mut sample_stream(1, 5));
        let c = sample_noise(&m, &mut sample_stream(1, 6));
        let d = sample_noise(&m, &mut sample_stream(2, 5));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn probe_variance_is_twice_cell() {
        let m = NoiseModel::from_probe_variance(0.02, 1e-4).unwrap();
        assert_eq!(m.sigma2_cell, 5e-5);
        assert_eq!(m.sigma2_probe, 1e-4);
        assert!(NoiseModel::from_probe_variance(0.0, -1.0).is_err());
    }

    #[test]
    fn joint_expectation_cases() {
        assert_eq!(joint_phase_expectation(0.0, 0.0, 0.3, 0.2), Complex64::new(1.0, 0.0));
        let z = joint_phase_expectation(1.0, 1.0, 0.04, 0.0);
        assert!((z - Complex64::from_polar(1.0, -0.02)).norm() < 1e-16);
        let z = joint_phase_expectation(1.5, -0.5, 0.0, 0.3);
        let marginals = libm::exp(-0.5 * 2.25 * 0.3) * libm::exp(-0.5 * 0.25 * 0.3);
        assert!((z.re - marginals).abs() < 1e-15 && z.im == 0.0);
    }

    #[test]
    fn f0_examples() {
        assert_eq!(f0_closed(3.0, 0.0, 0.0), 1.0);
        assert_eq!(f0_exact(3.0, 0.0, 0.0).unwrap(), 1.0);
        assert!((f0_closed(100.0, 0.02, 0.0) - libm::exp(-4.0)).abs() < 1e-15);
        let expected = libm::exp(-4.0 / 3.0) / libm::sqrt(3.0);
        assert!((f0_closed(100.0, 0.02, 1e-4) - expected).abs() < 1e-15);
        assert!((f0_exact(2.0, PI, 0.0).unwrap() - libm::exp(-16.0)).abs() < 1e-20);
    }

    #[test]
    fn f0_exact_matches_closed_form_in_small_angle_regime() {
        let closed = f0_closed(100.0, 0.01, 1e-6);
        let exact = f0_exact(100.0, 0.01, 1e-6).unwrap();
        assert!((closed - exact).abs() / exact < 1e-2);
    }

    #[test]
    fn f0_exact_finds_wrapped_peaks() {
        // broad noise: overlap peaks at ξ = −θ + 2πk all contribute
        let v = f0_exact(50.0, 0.3, 4.0).unwrap();
        let sigma = 2.0;
        let width = 1.0 / (50.0 * libm::sqrt(2.0));
        let mut approx = 0.0;
        for k in -3..=3 {
            let c = k as f64 * TAU - 0.3;
            approx += libm::exp(-0.5 * c * c / (sigma * sigma)) / (libm::sqrt(2.0 * PI) * sigma)
                * libm::sqrt(2.0 * PI) * width;
        }
        assert!((v - approx).abs() / approx < 1e-3, "{v} vs {approx}");
    }
}
