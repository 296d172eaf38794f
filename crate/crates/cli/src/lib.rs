//! Command line driver for the plateau membrane solver: configuration,
//! run orchestration and output files.

pub mod config;
pub mod output;
pub mod run;

pub use config::{ConfigError, MeshSource, ProblemConfig};
pub use run::{check_gradient, exit, run, solve, CliError, RunOutcome};
