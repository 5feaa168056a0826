//! Configuration, viscosity sweeps, rate fits and report files for `cnse`.

pub mod config;
pub mod emit;
pub mod error;
pub mod rate;
pub mod sweep;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use rate::{estimate_rate, RateEstimate};
pub use sweep::{run_single, run_sweep, RunOutcome, RunStatus, SummaryRow, SweepConfig, SweepResult};
