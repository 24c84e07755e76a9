use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("adaptive quadrature did not reach relative tolerance {tolerance:e} (estimated error {estimate:e} after {intervals} subintervals)")]
    NonConvergence {
        tolerance: f64,
        estimate: f64,
        intervals: usize,
    },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("photon count {n} has probability {probability:e}, too small to condition on")]
    Unconditionable { n: usize, probability: f64 },
    #[error("target state for photon count {n} has zero norm")]
    UndefinedTarget { n: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
