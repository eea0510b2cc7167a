//! `latcomm`: run one experiment and write its report.
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed or a computation did
//! not converge, 2 bad configuration, 3 an enumeration or memory cap was hit.

mod config;
mod experiments;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Experiment, ExperimentConfig, Format, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("budget: {0}")]
    Budget(String),
    #[error(transparent)]
    Library(#[from] latcomm::Error),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use latcomm::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Library(E::Cap { .. } | E::Budget { .. }) => 3,
            CliError::Library(E::Invalid(_) | E::Dimension(_) | E::OutsideRegion(_)) => 2,
            CliError::Library(_) | CliError::Output(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "latcomm", version, about = "Exact commutator, lattice-animal and Eden-growth experiments")]
struct Cli {
    /// Experiment to run; may instead come from the config file.
    #[arg(value_enum)]
    experiment: Option<Experiment>,
    /// JSON config file: {"subcommand", "params", "seed", "output", "format"}.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one parameter, KEY=VALUE with VALUE read as JSON. Repeatable.
    #[arg(long = "set", short = 's', value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for the parallel parts.
    #[arg(long, env = "LATCOMM_THREADS")]
    threads: Option<usize>,
    /// Do not print the verdict summary on stderr.
    #[arg(long, short)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("latcomm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    let cfg = ExperimentConfig::resolve(Overrides {
        subcommand: cli.experiment,
        config: cli.config,
        set: cli.set,
        seed: cli.seed,
        output: cli.out,
        format: cli.format,
    })?;
    let (format, output) = (cfg.format, cfg.output.clone());
    let report = experiments::run(cfg)?;
    let text = report.emit(format);
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if !cli.quiet {
        for v in &report.outcome.verdicts {
            eprintln!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
        }
    }
    Ok(if report.pass() { 0 } else { 1 })
}
