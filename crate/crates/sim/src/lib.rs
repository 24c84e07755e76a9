//! Sweeps, figure presets, CSV output and the verification runner built on
//! [`xpm_core`].

pub mod output;
pub mod spec;
pub mod sweep;
pub mod verify;

pub use output::write_csv;
pub use spec::{ConfigError, CouplingRule, GridSpec, KernelConfig, SweepSpec, SweptParameter};
pub use sweep::{figure_preset, mc_parallel, mc_with_threads, run_sweep, Figure, ResultRow, SweepError};
pub use verify::{verify, Report, Suite, VerifyOptions};
