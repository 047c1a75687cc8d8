//! `key = value` run configuration: parsing, defaults, overrides,
//! validation, and the canonical serialization that run headers hash.
//!
//! The format is deliberately primitive — one dotted key per line, full-line
//! `#` comments, no sections, no escapes — so configs diff cleanly and can
//! be generated from any language. Every key is validated; unknown and
//! duplicate keys are hard errors with line attribution.

use crate::error::CliError;
use crate::report::sci;
use freefall_core::{LambdaSource, SECONDS_PER_DAY};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Fully resolved run configuration with defaults applied.
///
/// Frequency-style inputs are already converted (`trap.freq_hz` → rad/s,
/// `mission.series_days` → seconds) so downstream code sees one
/// representation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// particle.radius_m
    pub radius_m: f64,
    /// particle.density_kg_m3
    pub density_kg_m3: f64,
    /// trap.omega_rad_s (possibly from trap.freq_hz × 2π)
    pub omega_rad_s: f64,
    /// trap.nbar
    pub nbar: f64,
    /// trap.squeeze
    pub squeeze: f64,
    /// mission series duration, s (from mission.series_days or
    /// mission.series_s)
    pub series_s: f64,
    /// mission.expansion_s
    pub expansion_s: f64,
    /// mission.sigma_meas_m
    pub sigma_meas_m: f64,
    /// models.csl.rate_hz
    pub csl_rate_hz: f64,
    /// models.csl.rc_m
    pub csl_rc_m: f64,
    /// sim.seed
    pub seed: u64,
    /// sim.replications
    pub replications: u64,
    /// sim.z_crit
    pub z_crit: f64,
    /// sim.lambda_source: which model sets the true rate in simulations
    pub lambda_source: LambdaSource,
    /// sim.lambda_m2s: explicit true rate, required iff lambda_source is
    /// custom
    pub lambda_m2s: Option<f64>,
    /// sweep.radius_min_m
    pub sweep_radius_min_m: f64,
    /// sweep.radius_max_m
    pub sweep_radius_max_m: f64,
    /// sweep.radius_points
    pub sweep_radius_points: usize,
    /// sweep.densities (comma-separated in the file)
    pub sweep_densities: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            radius_m: 2e-7,
            density_kg_m3: 2200.0,
            omega_rad_s: 1e5,
            nbar: 0.0,
            squeeze: 1.0,
            series_s: 30.0 * SECONDS_PER_DAY,
            expansion_s: 100.0,
            sigma_meas_m: 1e-7,
            csl_rate_hz: freefall_core::csl::DEFAULT_RATE_HZ,
            csl_rc_m: freefall_core::csl::DEFAULT_RC_M,
            seed: 1,
            replications: 200,
            z_crit: 1.0,
            lambda_source: LambdaSource::Dp,
            lambda_m2s: None,
            sweep_radius_min_m: 5e-8,
            sweep_radius_max_m: 2e-6,
            sweep_radius_points: 50,
            sweep_densities: vec![2000.0, 5000.0],
        }
    }
}

/// Where a key's value came from, for error attribution and override
/// precedence: file < `--set` < `--seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Line(usize),
    SetFlag,
    SeedFlag,
}

impl Origin {
    /// Precedence tier. A key set twice in the same tier is a duplicate;
    /// a higher tier overrides a lower one.
    fn rank(self) -> u8 {
        match self {
            Origin::Line(_) => 0,
            Origin::SetFlag => 1,
            Origin::SeedFlag => 2,
        }
    }
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::SetFlag => write!(f, "--set"),
            Origin::SeedFlag => write!(f, "--seed"),
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "particle.radius_m",
    "particle.density_kg_m3",
    "trap.omega_rad_s",
    "trap.freq_hz",
    "trap.nbar",
    "trap.squeeze",
    "mission.series_days",
    "mission.series_s",
    "mission.expansion_s",
    "mission.sigma_meas_m",
    "models.csl.rate_hz",
    "models.csl.rc_m",
    "sim.seed",
    "sim.replications",
    "sim.z_crit",
    "sim.lambda_source",
    "sim.lambda_m2s",
    "sweep.radius_min_m",
    "sweep.radius_max_m",
    "sweep.radius_points",
    "sweep.densities",
];

fn config_err(origin: Origin, key: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key} ({origin}): {message}"))
}

struct Resolved {
    values: HashMap<&'static str, (String, Origin)>,
}

impl Resolved {
    fn insert(&mut self, key: &str, value: String, origin: Origin) -> Result<(), CliError> {
        let Some(&known) = KNOWN_KEYS.iter().find(|&&k| k == key) else {
            return Err(CliError::Config(format!("unknown key `{key}` ({origin})")));
        };
        if let Some((_, prior)) = self.values.get(known) {
            if origin.rank() <= prior.rank() {
                return Err(CliError::Config(format!(
                    "duplicate key `{key}` ({prior} and {origin})"
                )));
            }
        }
        self.values.insert(known, (value, origin));
        Ok(())
    }

    fn take(&mut self, key: &'static str) -> Option<(String, Origin)> {
        self.values.remove(key)
    }
}

fn parse_number<T: std::str::FromStr>(
    entry: &Option<(String, Origin)>,
    key: &str,
    default: T,
) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    match entry {
        None => Ok(default),
        Some((raw, origin)) => raw
            .parse::<T>()
            .map_err(|e| config_err(*origin, key, format!("malformed value `{raw}`: {e}"))),
    }
}

fn check(
    condition: bool,
    slot: &Option<(String, Origin)>,
    key: &str,
    message: impl std::fmt::Display,
) -> Result<(), CliError> {
    if condition {
        return Ok(());
    }
    let origin = slot
        .as_ref()
        .map(|(_, o)| o.to_string())
        .unwrap_or_else(|| "default".to_string());
    Err(CliError::Config(format!("{key} ({origin}): {message}")))
}

/// Parses config text plus `--set`/`--seed` overrides into a validated
/// [`RunConfig`].
///
/// `overrides` are `(key, value)` pairs from `--set`, applied after the
/// file (later flags replace earlier file values; two `--set`s of the same
/// key conflict). `seed_flag` is `--seed`, applied last.
pub fn parse_config(
    text: &str,
    overrides: &[(String, String)],
    seed_flag: Option<u64>,
) -> Result<RunConfig, CliError> {
    let mut resolved = Resolved {
        values: HashMap::new(),
    };

    for (i, line) in text.lines().enumerate() {
        let origin = Origin::Line(i + 1);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(CliError::Config(format!(
                "line {}: expected `key = value`, got `{trimmed}`",
                i + 1
            )));
        };
        resolved.insert(key.trim(), value.trim().to_string(), origin)?;
    }
    for (key, value) in overrides {
        resolved.insert(key.trim(), value.trim().to_string(), Origin::SetFlag)?;
    }
    if let Some(seed) = seed_flag {
        resolved.insert("sim.seed", seed.to_string(), Origin::SeedFlag)?;
    }

    build(resolved)
}

fn build(mut resolved: Resolved) -> Result<RunConfig, CliError> {
    let defaults = RunConfig::default();

    let radius = resolved.take("particle.radius_m");
    let density = resolved.take("particle.density_kg_m3");
    let omega = resolved.take("trap.omega_rad_s");
    let freq = resolved.take("trap.freq_hz");
    let nbar = resolved.take("trap.nbar");
    let squeeze = resolved.take("trap.squeeze");
    let series_days = resolved.take("mission.series_days");
    let series_s = resolved.take("mission.series_s");
    let expansion = resolved.take("mission.expansion_s");
    let sigma = resolved.take("mission.sigma_meas_m");
    let csl_rate = resolved.take("models.csl.rate_hz");
    let csl_rc = resolved.take("models.csl.rc_m");
    let seed = resolved.take("sim.seed");
    let replications = resolved.take("sim.replications");
    let z_crit = resolved.take("sim.z_crit");
    let lambda_source = resolved.take("sim.lambda_source");
    let lambda_m2s = resolved.take("sim.lambda_m2s");
    let sweep_min = resolved.take("sweep.radius_min_m");
    let sweep_max = resolved.take("sweep.radius_max_m");
    let sweep_points = resolved.take("sweep.radius_points");
    let sweep_densities = resolved.take("sweep.densities");

    if omega.is_some() && freq.is_some() {
        return Err(CliError::Config(
            "trap.omega_rad_s and trap.freq_hz are two spellings of the same quantity; \
             set exactly one"
                .into(),
        ));
    }
    if series_days.is_some() && series_s.is_some() {
        return Err(CliError::Config(
            "mission.series_days and mission.series_s are two spellings of the same quantity; \
             set exactly one"
                .into(),
        ));
    }

    let omega_rad_s = match (&omega, &freq) {
        (_, None) => parse_number(&omega, "trap.omega_rad_s", defaults.omega_rad_s)?,
        (None, Some(_)) => {
            let f = parse_number(&freq, "trap.freq_hz", 0.0)?;
            check(f > 0.0, &freq, "trap.freq_hz", "must be positive")?;
            2.0 * std::f64::consts::PI * f
        }
        _ => unreachable!("both-present case rejected above"),
    };
    let series_seconds = match (&series_days, &series_s) {
        (_, None) => {
            let days = parse_number(
                &series_days,
                "mission.series_days",
                defaults.series_s / SECONDS_PER_DAY,
            )?;
            check(days > 0.0, &series_days, "mission.series_days", "must be positive")?;
            days * SECONDS_PER_DAY
        }
        (None, Some(_)) => parse_number(&series_s, "mission.series_s", 0.0)?,
        _ => unreachable!("both-present case rejected above"),
    };

    let source = match &lambda_source {
        None => defaults.lambda_source,
        Some((raw, origin)) => match raw.as_str() {
            "dp" => LambdaSource::Dp,
            "csl" => LambdaSource::Csl,
            "none" => LambdaSource::None,
            "custom" => LambdaSource::Custom,
            other => {
                return Err(config_err(
                    *origin,
                    "sim.lambda_source",
                    format!("unknown source `{other}` (expected dp, csl, none, or custom)"),
                ))
            }
        },
    };
    let lambda_value = match &lambda_m2s {
        None => None,
        Some(_) => Some(parse_number(&lambda_m2s, "sim.lambda_m2s", 0.0)?),
    };
    match (source, &lambda_value) {
        (LambdaSource::Custom, None) => {
            return Err(CliError::Config(
                "sim.lambda_source = custom requires sim.lambda_m2s".into(),
            ))
        }
        (LambdaSource::Custom, Some(v)) => {
            check(*v >= 0.0, &lambda_m2s, "sim.lambda_m2s", "must be non-negative")?
        }
        (_, Some(_)) => {
            return Err(CliError::Config(
                "sim.lambda_m2s is only meaningful with sim.lambda_source = custom".into(),
            ))
        }
        _ => {}
    }

    let densities = match &sweep_densities {
        None => defaults.sweep_densities.clone(),
        Some((raw, origin)) => {
            let parsed: Result<Vec<f64>, CliError> = raw
                .split(',')
                .map(|piece| {
                    piece.trim().parse::<f64>().map_err(|e| {
                        config_err(
                            *origin,
                            "sweep.densities",
                            format!("malformed value `{}`: {e}", piece.trim()),
                        )
                    })
                })
                .collect();
            let parsed = parsed?;
            check(!parsed.is_empty(), &sweep_densities, "sweep.densities", "must be non-empty")?;
            parsed
        }
    };

    let config = RunConfig {
        radius_m: parse_number(&radius, "particle.radius_m", defaults.radius_m)?,
        density_kg_m3: parse_number(&density, "particle.density_kg_m3", defaults.density_kg_m3)?,
        omega_rad_s,
        nbar: parse_number(&nbar, "trap.nbar", defaults.nbar)?,
        squeeze: parse_number(&squeeze, "trap.squeeze", defaults.squeeze)?,
        series_s: series_seconds,
        expansion_s: parse_number(&expansion, "mission.expansion_s", defaults.expansion_s)?,
        sigma_meas_m: parse_number(&sigma, "mission.sigma_meas_m", defaults.sigma_meas_m)?,
        csl_rate_hz: parse_number(&csl_rate, "models.csl.rate_hz", defaults.csl_rate_hz)?,
        csl_rc_m: parse_number(&csl_rc, "models.csl.rc_m", defaults.csl_rc_m)?,
        seed: parse_number(&seed, "sim.seed", defaults.seed)?,
        replications: parse_number(&replications, "sim.replications", defaults.replications)?,
        z_crit: parse_number(&z_crit, "sim.z_crit", defaults.z_crit)?,
        lambda_source: source,
        lambda_m2s: lambda_value,
        sweep_radius_min_m: parse_number(&sweep_min, "sweep.radius_min_m", defaults.sweep_radius_min_m)?,
        sweep_radius_max_m: parse_number(&sweep_max, "sweep.radius_max_m", defaults.sweep_radius_max_m)?,
        sweep_radius_points: parse_number(&sweep_points, "sweep.radius_points", defaults.sweep_radius_points)?,
        sweep_densities: densities,
    };

    check(config.radius_m > 0.0, &radius, "particle.radius_m", "must be positive")?;
    check(config.density_kg_m3 > 0.0, &density, "particle.density_kg_m3", "must be positive")?;
    check(config.omega_rad_s > 0.0, &omega, "trap.omega_rad_s", "must be positive")?;
    check(config.nbar >= 0.0, &nbar, "trap.nbar", "must be non-negative")?;
    check(config.squeeze >= 1.0, &squeeze, "trap.squeeze", "must be at least 1")?;
    check(config.series_s > 0.0, &series_s, "mission.series_s", "must be positive")?;
    check(config.expansion_s > 0.0, &expansion, "mission.expansion_s", "must be positive")?;
    check(
        config.expansion_s < config.series_s,
        &expansion,
        "mission.expansion_s",
        "must be shorter than the series duration",
    )?;
    check(
        (config.series_s / config.expansion_s).floor() >= 2.0,
        &expansion,
        "mission.expansion_s",
        "series must admit at least 2 runs",
    )?;
    check(config.sigma_meas_m >= 0.0, &sigma, "mission.sigma_meas_m", "must be non-negative")?;
    check(config.csl_rate_hz > 0.0, &csl_rate, "models.csl.rate_hz", "must be positive")?;
    check(config.csl_rc_m > 0.0, &csl_rc, "models.csl.rc_m", "must be positive")?;
    check(config.z_crit > 0.0, &z_crit, "sim.z_crit", "must be positive")?;
    check(config.replications >= 2, &replications, "sim.replications", "must be at least 2")?;
    check(config.sweep_radius_min_m > 0.0, &sweep_min, "sweep.radius_min_m", "must be positive")?;
    check(
        config.sweep_radius_max_m > config.sweep_radius_min_m,
        &sweep_max,
        "sweep.radius_max_m",
        "must exceed sweep.radius_min_m",
    )?;
    check(
        config.sweep_radius_points >= 2,
        &sweep_points,
        "sweep.radius_points",
        "must be at least 2",
    )?;
    for &d in &config.sweep_densities {
        check(d > 0.0, &sweep_densities, "sweep.densities", "entries must be positive")?;
    }

    Ok(config)
}

impl RunConfig {
    /// The configured test particle.
    pub fn particle(&self) -> Result<freefall_core::TestParticle, CliError> {
        Ok(freefall_core::make_particle(self.radius_m, self.density_kg_m3)?)
    }

    /// The configured release-time trap state of `particle`.
    pub fn initial_state(
        &self,
        particle: &freefall_core::TestParticle,
    ) -> Result<freefall_core::InitialState, CliError> {
        Ok(freefall_core::make_initial_state(
            particle,
            self.omega_rad_s,
            self.nbar,
            self.squeeze,
        )?)
    }

    /// The configured measurement series.
    pub fn mission(&self) -> Result<freefall_core::MissionProfile, CliError> {
        Ok(freefall_core::MissionProfile::new(
            self.series_s,
            self.expansion_s,
            self.sigma_meas_m,
        )?)
    }

    /// The configured CSL parameter point (reference mass fixed at 1 amu).
    pub fn csl_params(&self) -> Result<freefall_core::CslParams, CliError> {
        Ok(freefall_core::CslParams::new(
            self.csl_rate_hz,
            self.csl_rc_m,
            freefall_core::AMU,
        )?)
    }

    /// The true localization rate density simulations inject, resolved from
    /// `sim.lambda_source`.
    pub fn lambda_true(
        &self,
        particle: &freefall_core::TestParticle,
    ) -> Result<f64, CliError> {
        Ok(match self.lambda_source {
            LambdaSource::Dp => freefall_core::lambda_dp(particle),
            LambdaSource::Csl => freefall_core::lambda_csl(particle, &self.csl_params()?),
            LambdaSource::None => 0.0,
            LambdaSource::Custom => self
                .lambda_m2s
                .expect("validation guarantees a value for the custom source"),
        })
    }

    /// The configured radius/density sweep grid.
    pub fn sweep_spec(&self) -> Result<freefall_core::SweepSpec, CliError> {
        Ok(freefall_core::SweepSpec {
            radii: freefall_core::log_spaced_radii(
                self.sweep_radius_min_m,
                self.sweep_radius_max_m,
                self.sweep_radius_points,
            )?,
            densities: self.sweep_densities.clone(),
            omega: self.omega_rad_s,
            occupancy_nbar: self.nbar,
            squeeze_s: self.squeeze,
            mission: self.mission()?,
            csl: Some(self.csl_params()?),
        })
    }
    /// The resolved configuration as sorted `key = value` lines, one
    /// spelling per quantity (rad/s, seconds). This is the exact text the
    /// run header echoes and hashes, so identical configs always produce
    /// identical output bytes.
    pub fn canonical_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("mission.expansion_s = {}", sci(self.expansion_s)),
            format!("mission.series_s = {}", sci(self.series_s)),
            format!("mission.sigma_meas_m = {}", sci(self.sigma_meas_m)),
            format!("models.csl.rate_hz = {}", sci(self.csl_rate_hz)),
            format!("models.csl.rc_m = {}", sci(self.csl_rc_m)),
            format!("particle.density_kg_m3 = {}", sci(self.density_kg_m3)),
            format!("particle.radius_m = {}", sci(self.radius_m)),
            format!(
                "sim.lambda_source = {}",
                match self.lambda_source {
                    LambdaSource::Dp => "dp",
                    LambdaSource::Csl => "csl",
                    LambdaSource::None => "none",
                    LambdaSource::Custom => "custom",
                }
            ),
            format!("sim.replications = {}", self.replications),
            format!("sim.seed = {}", self.seed),
            format!("sim.z_crit = {}", sci(self.z_crit)),
            format!(
                "sweep.densities = {}",
                self.sweep_densities
                    .iter()
                    .map(|&d| sci(d))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            format!("sweep.radius_max_m = {}", sci(self.sweep_radius_max_m)),
            format!("sweep.radius_min_m = {}", sci(self.sweep_radius_min_m)),
            format!("sweep.radius_points = {}", self.sweep_radius_points),
            format!("trap.nbar = {}", sci(self.nbar)),
            format!("trap.omega_rad_s = {}", sci(self.omega_rad_s)),
            format!("trap.squeeze = {}", sci(self.squeeze)),
        ];
        if let Some(lambda) = self.lambda_m2s {
            lines.push(format!("sim.lambda_m2s = {}", sci(lambda)));
        }
        lines.sort();
        lines
    }

    /// SHA-256 over the canonical lines, as lowercase hex.
    pub fn sha256_hex(&self) -> String {
        let mut hasher = Sha256::new();
        for line in self.canonical_lines() {
            hasher.update(line.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            let _ = write!(hex, "{byte:02x}");
        }
        hex
    }
}
