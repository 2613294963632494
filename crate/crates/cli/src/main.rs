use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cylspec_cli::config::{ExperimentConfig, StudyKind};
use cylspec_cli::error::{CliError, CliResult};
use cylspec_cli::runner::{output_dir, run};
use cylspec_cli::selfcheck::run_self_check;

/// Spectral experiments on warped cylinders and planar guides.
#[derive(Parser)]
#[command(name = "cylspec", version)]
struct Cli {
    /// Run the built-in property suite and exit.
    #[arg(long)]
    check: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Threshold ladder of the cross-section.
    Thresholds(StudyArgs),
    /// Eigenvalues in a window, optionally under complex scaling.
    Spectrum(StudyArgs),
    /// Counts below the threshold as the truncation or mode grows.
    Accumulation(StudyArgs),
    /// Exponential decay rate of a bound state.
    Decay(StudyArgs),
    /// Persistence, conjugation and sector checks under complex scaling.
    Scaling(StudyArgs),
    /// Two-dimensional guide counts and eigenpairs.
    Guide2d(StudyArgs),
}

#[derive(Args)]
struct StudyArgs {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_command(kind: StudyKind, args: &StudyArgs) -> CliResult<bool> {
    let cfg = ExperimentConfig::load(&args.config)?;
    if cfg.study != kind {
        return Err(CliError::config(
            "study",
            format!("config declares {:?} but the {} subcommand was used", cfg.study.name(), kind.name()),
        ));
    }
    let dir = output_dir(&cfg, args.out.as_deref());
    let manifest = run(&cfg, &dir)?;
    for c in &manifest.checks {
        println!("[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    println!("wrote {} files to {}", manifest.files.len() + 1, dir.display());
    Ok(manifest.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = if cli.check {
        run_self_check().map(|checks| {
            for c in &checks {
                println!("[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
            }
            checks.iter().all(|c| c.passed)
        })
    } else {
        match &cli.command {
            Some(Command::Thresholds(a)) => run_command(StudyKind::Thresholds, a),
            Some(Command::Spectrum(a)) => run_command(StudyKind::Spectrum, a),
            Some(Command::Accumulation(a)) => run_command(StudyKind::Accumulation, a),
            Some(Command::Decay(a)) => run_command(StudyKind::Decay, a),
            Some(Command::Scaling(a)) => run_command(StudyKind::Scaling, a),
            Some(Command::Guide2d(a)) => run_command(StudyKind::Guide2d, a),
            None => {
                eprintln!("error: no subcommand given (see --help)");
                return ExitCode::from(2);
            }
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
