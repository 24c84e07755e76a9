//! Monte Carlo estimate of the Bloch- and noise-averaged success probabilities.
//!
//! Sample `i` under master seed `s` draws Alice's qubit, Bob's qubit and the
//! noise triple, in that order, from stream `(s, i)`. Per-sample outcomes are
//! reduced with pairwise summation in index order, so any partitioning of the
//! index range across workers gives bit-identical estimates.

use alloc::vec::Vec;

use super::detection::branch_success;
use super::qubit::{GateParams, QubitAmplitudes};
use super::state::parity_gate_state;
use crate::noise::{sample_noise, sample_stream, NoiseModel};

/// Success contributions of one Monte Carlo sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SampleOutcome {
    pub even: f64,
    pub odd: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_even: f64,
    pub p_odd: f64,
    pub se_even: f64,
    pub se_odd: f64,
    pub samples: usize,
    pub degenerate: usize,
}

pub fn sample_outcome(params: &GateParams, model: &NoiseModel, seed: u64, index: u64) -> SampleOutcome {
    let mut rng = sample_stream(seed, index);
    let qa = QubitAmplitudes::haar(&mut rng);
    let qb = QubitAmplitudes::haar(&mut rng);
    let noise = sample_noise(model, &mut rng);
    let state = parity_gate_state(&qa, &qb, params.alpha_p, params.theta, &noise);
    let b = branch_success(&state, &qa, &qb, params.n_max);
    SampleOutcome {
        even: b.even,
        odd: b.odd,
        degenerate: b.degenerate,
    }
}

/// Sequential estimator over samples `0..n_samples`.
pub fn mc_success_probabilities(
    params: &GateParams,
    model: &NoiseModel,
    n_samples: usize,
    seed: u64,
) -> McEstimate {
    let outcomes: Vec<SampleOutcome> = (0..n_samples as u64)
        .map(|i| sample_outcome(params, model, seed, i))
        .collect();
    summarize(&outcomes)
}

/// Means and standard errors of the per-sample outcomes, in slice order.
pub fn summarize(outcomes: &[SampleOutcome]) -> McEstimate {
    let n = outcomes.len();
    let even: Vec<f64> = outcomes.iter().map(|o| o.even).collect();
    let odd: Vec<f64> = outcomes.iter().map(|o| o.odd).collect();
    let (p_even, se_even) = mean_and_se(&even);
    let (p_odd, se_odd) = mean_and_se(&odd);
    McEstimate {
        p_even,
        p_odd,
        se_even,
        se_odd,
        samples: n,
        degenerate: outcomes.iter().filter(|o| o.degenerate).count(),
    }
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return (mean, f64::INFINITY);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (mean, libm::sqrt(var / n as f64))
}

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }

    #[test]
    fn noiseless_zero_phase_limit() {
        // no displacement: vacuum is always detected, even fidelity averages to C + D = 1/2
        let model = NoiseModel::from_probe_variance(0.0, 0.0).unwrap();
        let params = GateParams::new(100.0, 0.0, &model, 1e-9).unwrap();
        let est = mc_success_probabilities(&params, &model, 20_000, 11);
        assert!((est.p_even - 0.5).abs() < 3.0 * est.se_even, "{est:?}");
        assert_eq!(est.p_odd, 0.0);
    }

    #[test]
    fn deterministic_for_seed() {
        let model = NoiseModel::from_probe_variance(0.02, 1e-4).unwrap();
        let params = GateParams::new(100.0, 0.02, &model, 1e-9).unwrap();
        let a = mc_success_probabilities(&params, &model, 500, 5);
        let b = mc_success_probabilities(&params, &model, 500, 5);
        assert_eq!(a, b);
    }
}
