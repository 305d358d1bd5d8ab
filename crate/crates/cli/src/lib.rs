//! Experiment harness for the `adaprox` solvers: TOML experiment configs,
//! multi-seed parallel execution, trace/report/plot artifacts and sweeps.

pub mod config;
pub mod output;
pub mod report;
pub mod runner;
pub mod sweep;

pub use config::ExperimentConfig;
pub use report::RunReport;
pub use runner::{run_experiment, ExperimentOutcome, SeedRun};

/// Environment variable naming the default output root.
pub const OUT_DIR_ENV: &str = "ADAPROX_OUT_DIR";
