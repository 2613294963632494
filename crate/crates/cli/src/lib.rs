//! Configuration-driven experiment runner for the cylspec toolkit.

pub mod artifact;
pub mod config;
pub mod error;
pub mod plots;
pub mod runner;
pub mod selfcheck;
pub mod studies;

pub use config::{ExperimentConfig, StudyKind};
pub use error::{CliError, CliResult};
pub use runner::{run, RunManifest};
