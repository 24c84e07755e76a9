//! Continuous-time cross-phase modulation with causality-induced phase noise,
//! and the success probabilities of the weak-nonlinearity distributed parity
//! gate.
//!
//! Two independent routes are provided:
//!
//! * [`analytics`]: closed-form `P_even`, `P_odd` built on the Gaussian-averaged
//!   vacuum overlap `f₀` and the Bloch constants `C`, `D`;
//! * [`gate`]: a first-principles simulator that builds the noise-conditional
//!   Alice–Bob–probe density operator as coherent-state dyads, conditions on
//!   probe photon counts and averages by Monte Carlo.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytics;
pub mod error;
pub mod gate;
pub mod kernel;
pub mod noise;
pub mod quadrature;

pub use analytics::{
    p_even_analytic, p_odd_analytic, regime_check, success_analytic, BlochConstants, BlochMethod,
    RegimeFlags, SuccessProbabilities,
};
pub use error::{Error, Result};
pub use kernel::{GaussianPulse, KernelSummary, TwoPoleKernel};
pub use noise::{
    f0_closed, f0_exact, joint_phase_expectation, sample_noise, sample_stream, NoiseModel, NoiseSample,
};
