//! First-principles parity-gate simulator.
//!
//! The Alice–Bob–probe state after both XPM cells, the `−θ` shifter and the
//! `−α_P` displacement is held exactly as a sum of coherent-state dyads; the
//! photon-number resolving detector is applied through closed-form Fock
//! overlaps, so no probe Fock space is ever truncated to a matrix.

mod detection;
mod montecarlo;
mod qubit;
mod state;

pub use detection::{
    branch_success, conditional_ab_state, parity_target, photon_count_prob, probe_projection,
    success_overlap, AbMatrix, BranchSuccess, MIN_CONDITIONING_PROBABILITY,
};
pub use montecarlo::{
    mc_success_probabilities, pairwise_sum, sample_outcome, summarize, McEstimate, SampleOutcome,
};
pub use qubit::{GateParams, QubitAmplitudes};
pub use state::{
    coherent_overlap, fock_weight, parity_gate_state, single_xpm_density, CoherentDyad, HybridState,
    HybridTerm, QubitProbeState, QubitTerm,
};

/// Single-mode XPM theory: the even branch always succeeds with probability 1/2.
pub fn single_mode_p_even() -> f64 {
    0.5
}

/// Single-mode XPM theory: `(1 − e^{−θ²|α_P|²}) / 2`.
pub fn single_mode_p_odd(theta: f64, alpha_p_mag: f64) -> f64 {
    let x = theta * alpha_p_mag;
    -0.5 * libm::expm1(-x * x)
}
