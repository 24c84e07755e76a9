//! Two-pole (underdamped single resonance) medium response.
//!
//! All numerics run in normalized units where the resonance frequency is 1:
//! time is measured in `1/omega0` and frequency in `omega0`. Public methods take
//! and return raw values.

use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::Quadrature;

/// Upper frequency cutoff for the adaptive part of the variance integral,
/// in units of `omega0`. The remainder is integrated after `x -> CUTOFF / u`.
const FREQUENCY_CUTOFF: f64 = 50.0;

/// Gaussian pulse support is truncated at this many durations from the center.
const PULSE_SUPPORT: f64 = 8.0;

/// Causal response `h(t)` with frequency response
/// `H(Ω) = Ω₀² / (Ω₀² − Ω² − iΩγ₀)`, scaled by the coupling `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPoleKernel {
    omega0: f64,
    gamma0: f64,
    kappa: f64,
}

/// Peak time, peak single-photon phase and per-cell phase variance of a kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSummary {
    pub t_h: f64,
    pub theta: f64,
    pub sigma2_cell: f64,
}

impl KernelSummary {
    /// Thermal occupation `N` of the noise oscillator, from `σ² = (2N+1)θ/2`.
    pub fn thermal_occupation(&self) -> Option<f64> {
        (self.theta > 0.0).then(|| self.sigma2_cell / self.theta - 0.5)
    }
}

impl TwoPoleKernel {
    /// Requires `omega0 > 0`, `0 <= gamma0 < 2 omega0` and `kappa >= 0`.
    pub fn new(omega0: f64, gamma0: f64, kappa: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega0",
                reason: "must be finite and positive",
            });
        }
        if !(gamma0.is_finite() && gamma0 >= 0.0 && gamma0 < 2.0 * omega0) {
            return Err(Error::InvalidParameter {
                name: "gamma0",
                reason: "must satisfy 0 <= gamma0 < 2 omega0 (underdamped)",
            });
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: "must be finite and non-negative",
            });
        }
        Ok(Self {
            omega0,
            gamma0,
            kappa,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Same resonance with a different coupling.
    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::new(self.omega0, self.gamma0, kappa)
    }

    fn damping(&self) -> f64 {
        self.gamma0 / self.omega0
    }

    fn damped_frequency(&self) -> f64 {
        let g = self.damping();
        libm::sqrt(1.0 - 0.25 * g * g)
    }

    /// `h(t)`; exactly zero for `t < 0`.
    pub fn response(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let s = self.omega0 * t;
        if self.gamma0 == 0.0 {
            return self.omega0 * libm::sin(s);
        }
        let w = self.damped_frequency();
        self.omega0 * libm::exp(-0.5 * self.damping() * s) * libm::sin(w * s) / w
    }

    /// `H(Ω) = ∫ h(t) e^{iΩt} dt`.
    pub fn frequency_response(&self, omega: f64) -> Complex64 {
        let x = omega / self.omega0;
        Complex64::new(1.0, 0.0) / Complex64::new(1.0 - x * x, -x * self.damping())
    }

    /// `H_i(Ω) = Im H(Ω) = ∫ h(t) sin(Ωt) dt`; odd in `Ω`, non-negative for `Ω >= 0`.
    pub fn h_imag(&self, omega: f64) -> f64 {
        let x = omega / self.omega0;
        self.lorentz_imag(x)
    }

    fn lorentz_imag(&self, x: f64) -> f64 {
        let g = self.damping();
        let d = 1.0 - x * x;
        g * x / (d * d + g * g * x * x)
    }

    /// Argmax of `h` over `t >= 0`.
    pub fn peak_time(&self) -> f64 {
        if self.gamma0 == 0.0 {
            return FRAC_PI_2 / self.omega0;
        }
        let w = self.damped_frequency();
        libm::atan2(2.0 * w, self.damping()) / w / self.omega0
    }

    /// Peak single-photon phase `θ = κ h(t_h)`.
    pub fn peak_phase(&self) -> f64 {
        self.kappa * self.response(self.peak_time())
    }

    /// Per-cell phase-noise variance `σ² = (κ/π) ∫₀^∞ H_i(Ω) coth(Ω / 2T) dΩ`.
    ///
    /// `temperature` is the thermal energy expressed as an angular frequency,
    /// `k_B T / ħ`, in the same units as `omega0`; zero means the vacuum limit
    /// `coth -> 1`.
    pub fn cell_phase_variance(&self, temperature: f64) -> Result<f64> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                reason: "must be finite and non-negative",
            });
        }
        if self.kappa == 0.0 {
            return Ok(0.0);
        }
        let prefactor = self.kappa * self.omega0 / PI;
        if self.gamma0 == 0.0 {
            // H_i -> (π/2) Ω₀ δ(Ω − Ω₀) on the positive axis
            return Ok(0.5 * self.kappa * self.omega0 * thermal_factor(1.0, self.omega0, temperature));
        }

        let omega0 = self.omega0;
        let integrand = |x: f64| self.lorentz_imag(x) * thermal_factor(x, omega0, temperature);
        let g = self.damping();
        let mut points = [0.0; 9];
        let mut len = 0;
        for p in [
            0.0,
            1.0 - 10.0 * g,
            1.0 - g,
            1.0,
            1.0 + g,
            1.0 + 10.0 * g,
            FREQUENCY_CUTOFF,
        ] {
            if p >= 0.0 && p <= FREQUENCY_CUTOFF && (len == 0 || p > points[len - 1]) {
                points[len] = p;
                len += 1;
            }
        }
        let quad = Quadrature::default();
        let body = quad.integrate(integrand, &points[..len])?;
        let tail = quad.integrate(
            |u: f64| {
                let x = FREQUENCY_CUTOFF / u;
                integrand(x) * FREQUENCY_CUTOFF / (u * u)
            },
            &[0.0, 1.0],
        )?;
        Ok(prefactor * (body.value + tail.value))
    }

    pub fn summary(&self, temperature: f64) -> Result<KernelSummary> {
        Ok(KernelSummary {
            t_h: self.peak_time(),
            theta: self.peak_phase(),
            sigma2_cell: self.cell_phase_variance(temperature)?,
        })
    }

    /// Mean XPM phase factor `⟨e^{iμ_P(t)}⟩ = ∫ |φ(τ)|² e^{iκh(t−τ)} dτ` imparted
    /// by a single photon with wave packet `pulse` on a probe sampled at `t`.
    pub fn mean_xpm_factor(&self, pulse: &GaussianPulse, t: f64) -> Result<Complex64> {
        if self.kappa == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let lo = pulse.t_center - PULSE_SUPPORT * pulse.tau0;
        let hi = pulse.t_center + PULSE_SUPPORT * pulse.tau0;
        let integrand = |tau: f64| {
            let phase = self.kappa * self.response(t - tau);
            Complex64::from_polar(pulse.intensity(tau), phase)
        };
        let quad = Quadrature::with_rel_tol(1e-9);
        let est = if t > lo && t < hi {
            quad.integrate(integrand, &[lo, pulse.t_center.min(t), pulse.t_center.max(t), hi])?
        } else {
            quad.integrate(integrand, &[lo, pulse.t_center, hi])?
        };
        Ok(est.value)
    }
}

/// `coth(Ω / 2T)` at `Ω = x·omega0`, multiplied through by `x` and divided back
/// so that the `x -> 0` limit of `H_i · coth` stays finite.
fn thermal_factor(x: f64, omega0: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let y = 0.5 * x * omega0 / temperature;
    if y > 20.0 {
        1.0
    } else if y < 1e-6 {
        1.0 / y + y / 3.0
    } else {
        1.0 / libm::tanh(y)
    }
}

/// Normalized Gaussian wave packet `φ(t) = (πτ₀²)^{-1/4} exp(−(t−t₀)²/2τ₀²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPulse {
    pub tau0: f64,
    pub t_center: f64,
}

impl GaussianPulse {
    pub fn new(tau0: f64, t_center: f64) -> Result<Self> {
        if !(tau0.is_finite() && tau0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tau0",
                reason: "must be finite and positive",
            });
        }
        Ok(Self { tau0, t_center })
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        let z = (t - self.t_center) / self.tau0;
        libm::pow(PI * self.tau0 * self.tau0, -0.25) * libm::exp(-0.5 * z * z)
    }

    /// `|φ(t)|²`
    pub fn intensity(&self, t: f64) -> f64 {
        let z = (t - self.t_center) / self.tau0;
        libm::exp(-z * z) / (libm::sqrt(PI) * self.tau0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(g: f64) -> TwoPoleKernel {
        TwoPoleKernel::new(1.0, g, 1.0).unwrap()
    }

    #[test]
    fn rejects_overdamped_and_negative() {
        assert!(TwoPoleKernel::new(1.0, 2.0, 1.0).is_err());
        assert!(TwoPoleKernel::new(0.0, 0.0, 1.0).is_err());
        assert!(TwoPoleKernel::new(1.0, 0.1, -1.0).is_err());
    }

    #[test]
    fn causal() {
        for g in [0.0, 0.3, 1.9] {
            assert_eq!(kernel(g).response(-1.0), 0.0);
            assert_eq!(kernel(g).response(-1e-300), 0.0);
        }
    }

    #[test]
    fn undamped_peak_is_omega0() {
        let k = TwoPoleKernel::new(3.0, 0.0, 1.0).unwrap();
        assert_eq!(k.peak_time(), FRAC_PI_2 / 3.0);
        assert!((k.response(k.peak_time()) - 3.0).abs() < 1e-15);
        assert!((k.response(0.7) - 3.0 * libm::sin(2.1)).abs() < 1e-14);
    }

    #[test]
    fn h_imag_odd_and_zero_at_dc() {
        let k = kernel(0.2);
        assert_eq!(k.h_imag(0.0), 0.0);
        for w in [0.1, 0.9, 1.0, 7.3] {
            assert_eq!(k.h_imag(-w), -k.h_imag(w));
            assert!((k.frequency_response(w).im - k.h_imag(w)).abs() < 1e-14 * k.h_imag(w).abs().max(1.0));
        }
    }

    #[test]
    fn zero_coupling_is_noiseless() {
        let k = TwoPoleKernel::new(1.0, 0.1, 0.0).unwrap();
        assert_eq!(k.cell_phase_variance(0.0).unwrap(), 0.0);
        let pulse = GaussianPulse::new(0.3, 0.0).unwrap();
        assert_eq!(k.mean_xpm_factor(&pulse, 1.0).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn variance_matches_closed_form_at_zero_temperature() {
        // ∫₀^∞ H_i dx = (1/2w)(π/2 + atan(p/q)) with p = 1 − g²/2, q = g·w
        for g in [1e-3, 0.1, 0.5, 1.5] {
            let k = kernel(g);
            let w = libm::sqrt(1.0 - 0.25 * g * g);
            let p = 1.0 - 0.5 * g * g;
            let q = g * w;
            let exact = (FRAC_PI_2 + libm::atan(p / q)) / (2.0 * w) / PI;
            let got = k.cell_phase_variance(0.0).unwrap();
            assert!((got - exact).abs() / exact < 2e-6, "g={g}: {got} vs {exact}");
        }
    }

    #[test]
    fn thermal_variance_exceeds_vacuum() {
        let k = kernel(0.1);
        let cold = k.cell_phase_variance(0.0).unwrap();
        let warm = k.cell_phase_variance(0.5).unwrap();
        let hot = k.cell_phase_variance(5.0).unwrap();
        assert!(cold < warm && warm < hot);
        let undamped = kernel(0.0);
        let v = undamped.cell_phase_variance(0.5).unwrap();
        assert!((v - 0.5 / libm::tanh(1.0)).abs() < 1e-15);
    }

    #[test]
    fn summary_respects_thermal_bound() {
        let k = TwoPoleKernel::new(2.0, 0.0, 0.01).unwrap();
        let s = k.summary(0.0).unwrap();
        assert!((s.theta - 0.02).abs() < 1e-15);
        assert!((s.sigma2_cell - s.theta / 2.0).abs() < 1e-15);
        assert!(s.thermal_occupation().unwrap().abs() < 1e-12);
    }

    #[test]
    fn pulse_is_normalized() {
        let p = GaussianPulse::new(0.7, 2.0).unwrap();
        let est = Quadrature::with_rel_tol(1e-12)
            .integrate(|t| p.amplitude(t) * p.amplitude(t), &[-10.0, 2.0, 14.0])
            .unwrap();
        assert!((est.value - 1.0).abs() < 1e-10);
        assert!((p.intensity(2.3) - p.amplitude(2.3) * p.amplitude(2.3)).abs() < 1e-15);
    }
}
