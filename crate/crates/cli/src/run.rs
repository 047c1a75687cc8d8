//! Command implementations: each subcommand renders a complete report from
//! the resolved configuration, then either prints it or writes it to a
//! file atomically.

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report;
use freefall_core::{
    coherent_width, detectability_report, detection_power, dp_result, measurement_crossover_time,
    nongaussian_time, simulate_series, sweep_decoherence_time, sweep_ratios,
};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// The seven analysis commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    /// Detectability thresholds and model/threshold ratios.
    Feasibility,
    /// Gravitational self-energy, decay time, diffusion rate, and heating.
    Dp,
    /// CSL localization rate density.
    Csl,
    /// One Monte Carlo measurement series.
    Simulate,
    /// Replicated series: estimator spread and detection fraction.
    Power,
    /// Radius/density grid of detectability ratios (CSV).
    SweepRatio,
    /// Radius/density grid of non-Gaussianity onset times (CSV).
    SweepTd,
}

impl CommandKind {
    /// The name used on the command line and in report headers.
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Feasibility => "feasibility",
            CommandKind::Dp => "dp",
            CommandKind::Csl => "csl",
            CommandKind::Simulate => "simulate",
            CommandKind::Power => "power",
            CommandKind::SweepRatio => "sweep-ratio",
            CommandKind::SweepTd => "sweep-td",
        }
    }

    /// Default output file for commands that always produce one.
    fn default_out(self) -> Option<&'static str> {
        match self {
            CommandKind::SweepRatio => Some("sweep_ratio.csv"),
            CommandKind::SweepTd => Some("sweep_td.csv"),
            _ => None,
        }
    }
}

/// Renders the full report text for `kind` — header plus body — without
/// touching the filesystem. Everything here is deterministic in the
/// config, so two calls always yield identical bytes.
pub fn render(kind: CommandKind, config: &RunConfig) -> Result<String, CliError> {
    match kind {
        CommandKind::Feasibility => feasibility(config),
        CommandKind::Dp => dp(config),
        CommandKind::Csl => csl(config),
        CommandKind::Simulate => simulate(config),
        CommandKind::Power => power(config),
        CommandKind::SweepRatio => {
            let rows = sweep_ratios(&config.sweep_spec()?)?;
            Ok(report::ratio_csv(config, &rows))
        }
        CommandKind::SweepTd => {
            let rows = sweep_decoherence_time(&config.sweep_spec()?)?;
            Ok(report::onset_csv(config, &rows))
        }
    }
}

/// Runs `kind` end to end and returns the text to print on stdout.
///
/// Scalar reports go to stdout unless `--out` redirects them; sweeps always
/// land in a file (`--out` or the command's default name) and stdout gets a
/// one-line receipt.
pub fn execute(
    kind: CommandKind,
    config: &RunConfig,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let text = render(kind, config)?;
    let destination: Option<PathBuf> = out
        .map(Path::to_path_buf)
        .or_else(|| kind.default_out().map(PathBuf::from));
    match destination {
        None => Ok(text),
        Some(path) => {
            report::write_atomic(&path, &text)?;
            let rows = text
                .lines()
                .filter(|l| !l.starts_with('#') && !l.is_empty())
                .count();
            Ok(format!("wrote {} ({} lines)\n", path.display(), rows))
        }
    }
}

fn feasibility(config: &RunConfig) -> Result<String, CliError> {
    let particle = config.particle()?;
    let state = config.initial_state(&particle)?;
    let mission = config.mission()?;
    let csl = config.csl_params()?;
    let rep = detectability_report(&particle, &state, &mission, Some(&csl), config.z_crit)?;

    let mut out = report::header("feasibility", config);
    report::scalar(&mut out, "z_multiplier", rep.z_multiplier);
    report::scalar(&mut out, "lambda_min", rep.lambda_min);
    report::scalar(&mut out, "lambda_dp", rep.lambda_dp);
    report::scalar(&mut out, "ratio_dp", rep.ratio_dp);
    report::scalar(
        &mut out,
        "lambda_csl",
        rep.lambda_csl.expect("csl params always supplied"),
    );
    report::scalar(
        &mut out,
        "ratio_csl",
        rep.ratio_csl.expect("csl params always supplied"),
    );
    if mission.sigma_meas > 0.0 {
        match measurement_crossover_time(&state, &particle, &mission) {
            Ok(t_star) => report::scalar(&mut out, "crossover_time_s", t_star),
            // Readout noise exceeding the statistical uncertainty everywhere
            // is a legitimate feasibility verdict, not a failure.
            Err(freefall_core::Error::Solver(msg)) => {
                let _ = writeln!(out, "# note: {msg}");
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn dp(config: &RunConfig) -> Result<String, CliError> {
    let particle = config.particle()?;
    let state = config.initial_state(&particle)?;
    // The superposition size after the configured free expansion sets the
    // self-energy scale.
    let b = coherent_width(&state, &particle, config.expansion_s)?;
    let result = dp_result(&particle, b)?;
    let onset = nongaussian_time(&particle, &state)?;

    let mut out = report::header("dp", config);
    report::scalar(&mut out, "separation_b_m", b);
    report::scalar(&mut out, "e_g", result.e_g);
    report::scalar(&mut out, "tau_g", result.tau_g);
    report::scalar(&mut out, "lambda_dp", result.lambda_dp);
    report::scalar(&mut out, "heat_w", result.heat_w);
    report::scalar(&mut out, "heat_K_per_s", result.heat_k_per_s);
    report::scalar(&mut out, "nongaussian_onset_s", onset);
    Ok(out)
}

fn csl(config: &RunConfig) -> Result<String, CliError> {
    let particle = config.particle()?;
    let params = config.csl_params()?;
    let mut out = report::header("csl", config);
    report::scalar(
        &mut out,
        "lambda_csl",
        freefall_core::lambda_csl(&particle, &params),
    );
    Ok(out)
}

fn simulate(config: &RunConfig) -> Result<String, CliError> {
    let particle = config.particle()?;
    let state = config.initial_state(&particle)?;
    let mission = config.mission()?;
    let lambda_true = config.lambda_true(&particle)?;
    if config.lambda_source == freefall_core::LambdaSource::Dp {
        // Past the non-Gaussianity onset the Gaussian variance law is an
        // extrapolation; flag it but still run. An unreachable onset means
        // the law holds over the whole horizon, so solver errors are moot.
        if let Ok(onset) = nongaussian_time(&particle, &state) {
            if config.expansion_s > onset {
                eprintln!(
                    "warning: expansion time {} s exceeds the non-Gaussianity onset {} s; \
                     the variance model is extrapolated",
                    report::sci(config.expansion_s),
                    report::sci(onset)
                );
            }
        }
    }
    let series = simulate_series(&particle, &state, &mission, lambda_true, config.seed)?;

    let mut out = report::header("simulate", config);
    report::scalar(&mut out, "lambda_true", lambda_true);
    report::scalar(&mut out, "var_hat", series.var_hat);
    report::scalar(&mut out, "lambda_hat", series.lambda_hat);
    report::scalar(&mut out, "z_score", series.z_score);
    report::integer(&mut out, "n_runs", series.n_runs);
    report::integer(&mut out, "seed", series.seed);
    Ok(out)
}

fn power(config: &RunConfig) -> Result<String, CliError> {
    let particle = config.particle()?;
    let state = config.initial_state(&particle)?;
    let mission = config.mission()?;
    let lambda_true = config.lambda_true(&particle)?;
    let result = detection_power(
        &particle,
        &state,
        &mission,
        lambda_true,
        config.z_crit,
        config.replications,
        config.seed,
    )?;

    let mut out = report::header("power", config);
    report::scalar(&mut out, "lambda_true", lambda_true);
    report::scalar(&mut out, "z_crit", config.z_crit);
    report::scalar(&mut out, "mean_lambda_hat", result.mean_lambda_hat);
    report::scalar(&mut out, "sd_lambda_hat", result.sd_lambda_hat);
    report::scalar(&mut out, "detection_fraction", result.detection_fraction);
    report::integer(&mut out, "replications", result.replications);
    report::integer(&mut out, "seed", config.seed);
    Ok(out)
}
