//! Experiment runner for `folner-core`: strict JSON configs in, fixed-format
//! CSV tables and JSON reports out.

pub mod config;
pub mod error;
pub mod format;
pub mod listing;
pub mod ops;
pub mod output;
pub mod run;
pub mod verify;

pub use config::{ExperimentConfig, Plan};
pub use error::CliError;
pub use run::{cmd_run, run_config, RunOptions, RunOutcome};
