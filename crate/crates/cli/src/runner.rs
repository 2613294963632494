//! Writes study artifacts and the run manifest to an output directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::artifact::{ArtifactKind, Check};
use crate::config::{ExperimentConfig, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::studies::run_study;

#[derive(Debug, Clone, Serialize)]
pub struct ManifestFile {
    pub name: String,
    pub kind: ArtifactKind,
    pub records: usize,
    pub bytes: usize,
}

/// Index of one run. The only file whose content depends on the clock.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub study: String,
    pub config: ExperimentConfig,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub files: Vec<ManifestFile>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub const MANIFEST_NAME: &str = "manifest.json";

fn write(path: PathBuf, content: &[u8]) -> CliResult<()> {
    fs::write(&path, content).map_err(|source| CliError::Io { path, source })
}

/// Runs the configured study into `out_dir` and returns its manifest.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> CliResult<RunManifest> {
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let output = run_study(cfg)?;
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for a in &output.artifacts {
        write(out_dir.join(&a.name), a.content.as_bytes())?;
        files.push(ManifestFile {
            name: a.name.clone(),
            kind: a.kind,
            records: a.records,
            bytes: a.content.len(),
        });
    }
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        study: cfg.study.name().to_string(),
        config: cfg.clone(),
        started_unix_seconds: started,
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
        passed: output.passed(),
        checks: output.checks,
        files,
    };
    let mut text =
        serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Serialize(e.to_string()))?;
    text.push('\n');
    write(out_dir.join(MANIFEST_NAME), text.as_bytes())?;
    Ok(manifest)
}

/// Output directory: the command-line override, else the config, else `results/<study>`.
pub fn output_dir(cfg: &ExperimentConfig, cli: Option<&Path>) -> PathBuf {
    cli.map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results").join(cfg.study.name()))
}
