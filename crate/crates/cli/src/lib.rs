//! Experiment driver: configuration, per-trial pipeline runs, parallel
//! sweeps and reproducible reports.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod report;

pub use config::{Check, ExperimentConfig, Format};
pub use error::{CliError, Result};
pub use experiment::{run_experiment, Execution, Experiment, ExperimentReport};
pub use report::{run_trial, TrialOutcome, TrialReport, TrialTimings};
