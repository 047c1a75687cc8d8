//! Statistical detectability analysis: variance-estimate uncertainty, the
//! minimum distinguishable localization rate, the measurement-noise
//! crossover time, and the combined detectability report.
//!
//! One measurement series of duration T yields N = ⌊T/t⌋ release–expand–
//! measure runs of expansion time t. Because sample variances of N Gaussian
//! draws scatter with relative standard error sqrt(2/(N−1)) ≈ sqrt(2t/T),
//! the smallest rate density distinguishable at one standard error is
//!
//! ```text
//! Λ_min = sqrt(1/(2·T·t)) · 3·⟨p̂²(0)⟩ / ħ²
//! ```
//!
//! (the diffusion term of the variance law set equal to one standard error
//! of the ballistic variance, solved for Λ). A configurable z-multiplier
//! scales this threshold for k-sigma detection criteria.

use crate::constants::HBAR;
use crate::csl::{lambda_csl, CslParams};
use crate::dp::lambda_dp;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::particle::{InitialState, TestParticle};
use crate::solve::bisect;

/// One measurement series: total budget T, per-run expansion time t, and 1σ
/// position readout error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissionProfile {
    /// Series duration T, s.
    pub series_time_t: f64,
    /// Single-run free-expansion time t, s.
    pub expansion_time_t: f64,
    /// 1σ position measurement error, m (≥ 0).
    pub sigma_meas: f64,
}

impl MissionProfile {
    /// Builds a profile, requiring 0 < t < T, at least two runs per series,
    /// and σ ≥ 0.
    pub fn new(series_time: f64, expansion_time: f64, sigma_meas: f64) -> Result<Self> {
        let series_time = ensure_positive("series time", series_time)?;
        let expansion_time = ensure_positive("expansion time", expansion_time)?;
        let sigma_meas = ensure_non_negative("measurement sigma", sigma_meas)?;
        if expansion_time >= series_time {
            return Err(Error::domain(format!(
                "expansion time ({expansion_time} s) must be shorter than the series time \
                 ({series_time} s)"
            )));
        }
        let profile = MissionProfile {
            series_time_t: series_time,
            expansion_time_t: expansion_time,
            sigma_meas,
        };
        if profile.n_runs() < 2 {
            return Err(Error::domain(format!(
                "series admits only {} run(s); at least 2 are needed to estimate a variance",
                profile.n_runs()
            )));
        }
        Ok(profile)
    }

    /// Number of runs per series, N = ⌊T/t⌋.
    pub fn n_runs(&self) -> u64 {
        (self.series_time_t / self.expansion_time_t).floor() as u64
    }
}

/// Relative statistical uncertainty of the variance estimate from one
/// series: sqrt(2/(N−1)) exactly, or the T ≫ t approximation sqrt(2t/T)
/// when `approximate` is set.
pub fn fractional_variance_uncertainty(
    mission: &MissionProfile,
    approximate: bool,
) -> Result<f64> {
    if approximate {
        return Ok((2.0 * mission.expansion_time_t / mission.series_time_t).sqrt());
    }
    let n = mission.n_runs();
    if n < 2 {
        return Err(Error::domain(format!(
            "need at least 2 runs for a variance estimate, got {n}"
        )));
    }
    Ok((2.0 / (n - 1) as f64).sqrt())
}

/// The minimum localization rate density distinguishable at one standard
/// error of the variance estimate, m⁻²·s⁻¹.
pub fn lambda_min(state: &InitialState, mission: &MissionProfile) -> f64 {
    (1.0 / (2.0 * mission.series_time_t * mission.expansion_time_t)).sqrt() * 3.0 * state.p_var0
        / (HBAR * HBAR)
}

/// The expansion time t* past which the statistical uncertainty of the
/// variance estimate exceeds the measurement-noise variance: the root of
///
/// ```text
/// sqrt(2t/T) · [⟨x̂²(0)⟩ + t²·⟨p̂²(0)⟩/m²] = σ²
/// ```
///
/// solved by bisection on [1e-6 s, T/2]. The left side is strictly
/// increasing and vanishes at t = 0, so when it already exceeds σ² at 1e-6 s
/// the bracket extends down to t = 0 (where the excess is −σ² < 0
/// analytically) instead of failing, keeping the σ → 0 limit t* → 0 exact.
pub fn measurement_crossover_time(
    state: &InitialState,
    particle: &TestParticle,
    mission: &MissionProfile,
) -> Result<f64> {
    let sigma = mission.sigma_meas;
    if sigma <= 0.0 {
        return Err(Error::domain(format!(
            "measurement sigma must be positive for a crossover time, got {sigma}"
        )));
    }
    let m2 = particle.mass_m * particle.mass_m;
    let big_t = mission.series_time_t;
    let excess = |t: f64| {
        (2.0 * t / big_t).sqrt() * (state.x_var0 + t * t * state.p_var0 / m2) - sigma * sigma
    };

    let lo = 1e-6;
    let hi = big_t / 2.0;
    if excess(lo) > 0.0 {
        return bisect(excess, 0.0, lo, 1e-12, 200);
    }
    if excess(hi) < 0.0 {
        return Err(Error::Solver(format!(
            "no crossover up to T/2 = {hi} s: measurement noise (sigma = {sigma} m) dominates \
             the statistical variance uncertainty over the whole series"
        )));
    }
    bisect(excess, lo, hi, 1e-12, 200)
}

/// Detectability of the two models against the statistical threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectabilityReport {
    /// Threshold multiplier (1 = one standard error).
    pub z_multiplier: f64,
    /// Minimum detectable rate density at that multiplier, m⁻²·s⁻¹.
    pub lambda_min: f64,
    /// Gravitational diffusion rate density, m⁻²·s⁻¹.
    pub lambda_dp: f64,
    /// lambda_dp / lambda_min; > 1 means detectable within the series.
    pub ratio_dp: f64,
    /// CSL rate density, when CSL parameters were supplied.
    pub lambda_csl: Option<f64>,
    /// lambda_csl / lambda_min, when CSL parameters were supplied.
    pub ratio_csl: Option<f64>,
}

/// Builds the detectability report for one particle/state/mission point.
///
/// `z_multiplier` scales the threshold for k-sigma criteria; 1 is the
/// one-standard-error convention of [`lambda_min`].
pub fn detectability_report(
    particle: &TestParticle,
    state: &InitialState,
    mission: &MissionProfile,
    csl: Option<&CslParams>,
    z_multiplier: f64,
) -> Result<DetectabilityReport> {
    let z_multiplier = ensure_positive("z multiplier", z_multiplier)?;
    let threshold = z_multiplier * lambda_min(state, mission);
    let l_dp = lambda_dp(particle);
    let l_csl = csl.map(|params| lambda_csl(particle, params));
    Ok(DetectabilityReport {
        z_multiplier,
        lambda_min: threshold,
        lambda_dp: l_dp,
        ratio_dp: l_dp / threshold,
        lambda_csl: l_csl,
        ratio_csl: l_csl.map(|l| l / threshold),
    })
}
