//! Experiment harness for the secrecy-rate simulator: configuration,
//! parameter sweeps written as CSV, and the self-check suites behind the
//! `validate` subcommand.

pub mod config;
pub mod error;
pub mod oracles;
pub mod sweep;
pub mod validate;

pub use config::{AlphaMode, ExperimentConfig, SweepVariable};
pub use error::CliError;
pub use sweep::{run_sweep, SweepRow};
pub use validate::{run_validate, ValidationReport};
