use clap::{Parser, Subcommand};
use freefall_cli::config::parse_config;
use freefall_cli::error::CliError;
use freefall_cli::run::{execute, CommandKind};
use std::path::PathBuf;
use std::process::ExitCode;

/// Detectability analysis for gravitationally induced decoherence in
/// free-fall expansion experiments.
#[derive(Parser)]
#[command(name = "freefall", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file of `key = value` lines; built-in defaults apply when
    /// omitted
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write the report here instead of stdout (sweeps: instead of the
    /// default CSV name)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Override sim.seed (wins over the file and --set)
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Override one config key (repeatable), e.g. --set trap.nbar=2
    #[arg(long, global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Detectability thresholds and model-to-threshold ratios
    Feasibility,
    /// Gravitational self-energy, decay time, diffusion rate, and heating
    Dp,
    /// Spontaneous-localization rate density
    Csl,
    /// One Monte Carlo measurement series
    Simulate,
    /// Replicated series: estimator spread and detection fraction
    Power,
    /// Radius/density grid of detectability ratios (CSV)
    SweepRatio,
    /// Radius/density grid of decoherence onset times (CSV)
    SweepTd,
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Feasibility => CommandKind::Feasibility,
            Command::Dp => CommandKind::Dp,
            Command::Csl => CommandKind::Csl,
            Command::Simulate => CommandKind::Simulate,
            Command::Power => CommandKind::Power,
            Command::SweepRatio => CommandKind::SweepRatio,
            Command::SweepTd => CommandKind::SweepTd,
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?,
        None => String::new(),
    };
    let mut overrides = Vec::with_capacity(cli.set.len());
    for pair in &cli.set {
        let Some((key, value)) = pair.split_once('=') else {
            return Err(CliError::Config(format!(
                "--set expects KEY=VALUE, got `{pair}`"
            )));
        };
        overrides.push((key.to_string(), value.to_string()));
    }
    let config = parse_config(&text, &overrides, cli.seed)?;
    execute(cli.command.kind(), &config, cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(stdout_text) => {
            print!("{stdout_text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
