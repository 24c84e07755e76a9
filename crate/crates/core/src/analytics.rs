//! Closed-form success probabilities of the noisy parity gate.
//!
//! With `x = |β|²` and `y = |β′|²` uniform on `[0, 1]`, `a = (1−x)y` and
//! `b = x(1−y)`, the Bloch averages are `C = E[(a² + b²)/(a + b)]` and
//! `D = E[2ab/(a + b)]`. Since `E[a + b] = 1/2`, `C + D = 1/2` exactly.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use rand_distr::{Distribution, Uniform};

use crate::error::{Error, Result};
use crate::gate::pairwise_sum;
use crate::noise::{f0_closed, f0_exact, sample_stream};
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlochMethod {
    /// Tensor Gauss–Legendre rule with `resolution` nodes per axis.
    Quadrature2d,
    /// Plain Monte Carlo with `resolution` samples.
    MonteCarlo { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochConstants {
    pub c: f64,
    pub d: f64,
    pub method: BlochMethod,
    pub resolution: usize,
    pub error_estimate: f64,
}

fn weights(x: f64, y: f64) -> (f64, f64) {
    let a = (1.0 - x) * y;
    let b = x * (1.0 - y);
    let s = a + b;
    if s == 0.0 {
        return (0.0, 0.0);
    }
    ((a * a + b * b) / s, 2.0 * a * b / s)
}

fn tensor_gauss(n: usize) -> (f64, f64) {
    let (nodes, w) = gauss_legendre(n);
    let mut c = 0.0;
    let mut d = 0.0;
    for i in 0..n {
        let x = 0.5 * (nodes[i] + 1.0);
        let mut ci = 0.0;
        let mut di = 0.0;
        for j in 0..n {
            let y = 0.5 * (nodes[j] + 1.0);
            let (cc, dd) = weights(x, y);
            ci += w[j] * cc;
            di += w[j] * dd;
        }
        c += w[i] * ci;
        d += w[i] * di;
    }
    (0.25 * c, 0.25 * d)
}

impl BlochConstants {
    pub const MIN_QUADRATURE_NODES: usize = 100;
    pub const MIN_MC_SAMPLES: usize = 1000;
    pub const DEFAULT_NODES: usize = 512;

    /// `C` and `D` from the Bloch-sphere averages.
    ///
    /// The quadrature error estimate is the change against a rule with half
    /// the nodes; the Monte Carlo one is four standard errors.
    pub fn compute(method: BlochMethod, resolution: usize) -> Result<Self> {
        match method {
            BlochMethod::Quadrature2d => {
                if resolution < Self::MIN_QUADRATURE_NODES {
                    return Err(Error::InvalidParameter {
                        name: "resolution",
                        reason: "quadrature needs at least 100 nodes per axis",
                    });
                }
                let (c, d) = tensor_gauss(resolution);
                let (c_half, d_half) = tensor_gauss(resolution / 2);
                let error_estimate = (c - c_half).abs().max((d - d_half).abs()).max(f64::EPSILON * 16.0);
                Ok(Self {
                    c,
                    d,
                    method,
                    resolution,
                    error_estimate,
                })
            }
            BlochMethod::MonteCarlo { seed } => {
                if resolution < Self::MIN_MC_SAMPLES {
                    return Err(Error::InvalidParameter {
                        name: "resolution",
                        reason: "Monte Carlo needs at least 1000 samples",
                    });
                }
                let mut rng = sample_stream(seed, 0);
                let unit = Uniform::new(0.0, 1.0).expect("valid range");
                let mut cs = Vec::with_capacity(resolution);
                let mut ds = Vec::with_capacity(resolution);
                for _ in 0..resolution {
                    let x: f64 = unit.sample(&mut rng);
                    let y: f64 = unit.sample(&mut rng);
                    let (c, d) = weights(x, y);
                    cs.push(c);
                    ds.push(d);
                }
                let n = resolution as f64;
                let c = pairwise_sum(&cs) / n;
                let d = pairwise_sum(&ds) / n;
                let var = |xs: &[f64], m: f64| {
                    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
                    pairwise_sum(&sq) / (n - 1.0)
                };
                let sums: Vec<f64> = cs.iter().zip(&ds).map(|(a, b)| a + b).collect();
                let se = libm::sqrt(var(&cs, c).max(var(&ds, d)).max(var(&sums, c + d)) / n);
                Ok(Self {
                    c,
                    d,
                    method,
                    resolution,
                    error_estimate: 4.0 * se,
                })
            }
        }
    }

    /// 512 × 512 Gauss–Legendre evaluation.
    pub fn reference() -> Self {
        Self::compute(BlochMethod::Quadrature2d, Self::DEFAULT_NODES).expect("resolution above minimum")
    }
}

fn f0(alpha_p: f64, theta: f64, sigma2_probe: f64, exact: bool) -> Result<f64> {
    if exact {
        f0_exact(alpha_p, theta, sigma2_probe)
    } else {
        Ok(f0_closed(alpha_p, theta, sigma2_probe))
    }
}

/// `P_even = f₀(α_P, 0) [C + D e^{−σ_P²/2}]`; independent of `theta`.
pub fn p_even_analytic(
    alpha_p: f64,
    _theta: f64,
    sigma2_probe: f64,
    constants: &BlochConstants,
    exact: bool,
) -> Result<f64> {
    let coherence = libm::exp(-0.5 * sigma2_probe);
    Ok(f0(alpha_p, 0.0, sigma2_probe, exact)? * (constants.c + constants.d * coherence))
}

/// `P_odd = C [1 − f₀(α_P, θ)] + D e^{−σ_P²/2} [f₀(√2 α_P, 0) − f₀(α_P, 0)]`.
pub fn p_odd_analytic(
    alpha_p: f64,
    theta: f64,
    sigma2_probe: f64,
    constants: &BlochConstants,
    exact: bool,
) -> Result<f64> {
    let coherence = libm::exp(-0.5 * sigma2_probe);
    let diagonal = 1.0 - f0(alpha_p, theta, sigma2_probe, exact)?;
    let cross = f0(SQRT_2 * alpha_p, 0.0, sigma2_probe, exact)? - f0(alpha_p, 0.0, sigma2_probe, exact)?;
    Ok(constants.c * diagonal + constants.d * coherence * cross)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessProbabilities {
    pub p_even: f64,
    pub p_odd: f64,
}

impl SuccessProbabilities {
    pub fn p_success(&self) -> f64 {
        self.p_even + self.p_odd
    }
}

pub fn success_analytic(
    alpha_p: f64,
    theta: f64,
    sigma2_probe: f64,
    constants: &BlochConstants,
    exact: bool,
) -> Result<SuccessProbabilities> {
    Ok(SuccessProbabilities {
        p_even: p_even_analytic(alpha_p, theta, sigma2_probe, constants, exact)?,
        p_odd: p_odd_analytic(alpha_p, theta, sigma2_probe, constants, exact)?,
    })
}

/// The three operating conditions for near-ideal gate performance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeFlags {
    /// `θ²|α_P|² > 1`
    pub distinguishable: bool,
    /// `σ_P²|α_P|² < 0.1`
    pub low_probe_noise: bool,
    /// `σ_P² < 0.1`
    pub small_phase_noise: bool,
}

impl RegimeFlags {
    pub fn all(&self) -> bool {
        self.distinguishable && self.low_probe_noise && self.small_phase_noise
    }
}

pub fn regime_check(theta: f64, sigma2_probe: f64, alpha_p_mag: f64) -> RegimeFlags {
    let a2 = alpha_p_mag * alpha_p_mag;
    RegimeFlags {
        distinguishable: theta * theta * a2 > 1.0,
        low_probe_noise: sigma2_probe * a2 < 0.1,
        small_phase_noise: sigma2_probe < 0.1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_slice_of_c_integrand() {
        // x = 0: a = y, b = 0, so the C weight is y
        for y in [0.1, 0.5, 0.9] {
            assert!((weights(0.0, y).0 - y).abs() < 1e-15);
            assert_eq!(weights(0.0, y).1, 0.0);
        }
    }

    #[test]
    fn resolution_floor() {
        assert!(BlochConstants::compute(BlochMethod::Quadrature2d, 99).is_err());
        assert!(BlochConstants::compute(BlochMethod::MonteCarlo { seed: 1 }, 999).is_err());
    }

    #[test]
    fn noiseless_limits() {
        let k = BlochConstants::reference();
        let pe = p_even_analytic(100.0, 0.02, 0.0, &k, false).unwrap();
        assert!((pe - 0.5).abs() < 1e-12);
        assert_eq!(p_odd_analytic(100.0, 0.0, 0.0, &k, false).unwrap(), 0.0);
    }

    #[test]
    fn regime_examples() {
        let r = regime_check(0.02, 1e-6, 100.0);
        assert!(r.all());
        let r = regime_check(0.02, 0.02, 100.0);
        assert_eq!(
            (r.distinguishable, r.low_probe_noise, r.small_phase_noise),
            (true, false, true)
        );
        let r = regime_check(0.0, 0.0, 0.0);
        assert_eq!(
            (r.distinguishable, r.low_probe_noise, r.small_phase_noise),
            (false, true, true)
        );
    }
}
