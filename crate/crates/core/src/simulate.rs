//! Monte Carlo simulation of the release–expand–measure protocol.
//!
//! One simulated series draws N = ⌊T/t⌋ position measurements from the
//! Gaussian the variance law predicts at the chosen true rate density
//! (measurement noise added in quadrature), estimates the variance with the
//! standard unbiased estimator, and inverts the diffusion term for a rate
//! estimate. Replicated series quantify how often a given Λ would actually
//! be detected at a chosen z threshold.
//!
//! Reproducibility contract: all randomness flows from a single 64-bit seed
//! through ChaCha12 streams. Replication k of a power run uses the
//! substream seed `splitmix64(seed + (k+1)·φ)` (φ = 2⁶⁴/golden ratio), so
//! streams never overlap, and results are bit-identical across thread
//! counts because replications are aggregated in index order.

use crate::constants::HBAR;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::particle::{InitialState, TestParticle};
use crate::stats::MissionProfile;
use crate::wavepacket::{variance_at, DecoherenceSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Outcome of one simulated measurement series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    /// Unbiased sample variance of the N positions, m².
    pub var_hat: f64,
    /// Rate-density estimate from inverting the diffusion term, m⁻²·s⁻¹.
    /// Negative values are estimator noise and are reported as-is.
    pub lambda_hat: f64,
    /// Excess of `var_hat` over the zero-rate expectation, in units of the
    /// analytic standard error sqrt(2/(N−1)) of that expectation.
    pub z_score: f64,
    /// Number of runs in the series, N = ⌊T/t⌋.
    pub n_runs: u64,
    /// Seed that produced this series.
    pub seed: u64,
}

/// Aggregate over replicated series at fixed true rate density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerResult {
    /// Mean of the per-series rate estimates, m⁻²·s⁻¹.
    pub mean_lambda_hat: f64,
    /// Sample standard deviation (divisor R−1) of the rate estimates.
    pub sd_lambda_hat: f64,
    /// Fraction of replications with z ≥ z_crit.
    pub detection_fraction: f64,
    /// Number of replications R.
    pub replications: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed for substream k of a master seed.
///
/// Injective in k for fixed seed (odd-constant multiply and the splitmix64
/// finalizer are both bijections of u64), so replication streams are
/// guaranteed distinct.
pub fn substream_seed(seed: u64, k: u64) -> u64 {
    splitmix64_mix(seed.wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Simulates one measurement series at true rate density `lambda_true` and
/// estimates the variance, the rate density, and the z-score against the
/// zero-rate expectation. Fully deterministic given the seed.
pub fn simulate_series(
    particle: &TestParticle,
    state: &InitialState,
    mission: &MissionProfile,
    lambda_true: f64,
    seed: u64,
) -> Result<SeriesResult> {
    let lambda_true = ensure_non_negative("true rate density", lambda_true)?;
    let n = mission.n_runs();
    if n < 2 {
        return Err(Error::domain(format!(
            "series admits only {n} run(s); at least 2 are needed to estimate a variance"
        )));
    }
    let t = mission.expansion_time_t;
    let noise_var = mission.sigma_meas * mission.sigma_meas;

    let true_spec = DecoherenceSpec::custom(lambda_true)?;
    let total_var = variance_at(state, particle, &true_spec, t)? + noise_var;
    let total_sd = total_var.sqrt();

    // Welford's single-pass mean/variance update: numerically stable and
    // exactly the divisor-(N−1) estimator the series statistics assume.
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut mean = 0.0_f64;
    let mut sum_sq_dev = 0.0_f64;
    for i in 1..=n {
        let unit: f64 = rng.sample(StandardNormal);
        let x = total_sd * unit;
        let delta = x - mean;
        mean += delta / i as f64;
        sum_sq_dev += delta * (x - mean);
    }
    let var_hat = sum_sq_dev / (n - 1) as f64;

    let baseline = variance_at(state, particle, &DecoherenceSpec::none(), t)?;
    let m_sq = particle.mass_m * particle.mass_m;
    let lambda_hat =
        (var_hat - noise_var - baseline) * 3.0 * m_sq / (2.0 * HBAR * HBAR * t * t * t);

    let expected_null = baseline + noise_var;
    let z_score =
        (var_hat - expected_null) / ((2.0 / (n - 1) as f64).sqrt() * expected_null);

    Ok(SeriesResult {
        var_hat,
        lambda_hat,
        z_score,
        n_runs: n,
        seed,
    })
}

/// Replicates [`simulate_series`] R times on distinct substreams and
/// aggregates the rate estimates and the detection fraction at `z_crit`.
///
/// Replications run in parallel but are collected and aggregated in
/// replication-index order, so the result is independent of thread count.
pub fn detection_power(
    particle: &TestParticle,
    state: &InitialState,
    mission: &MissionProfile,
    lambda_true: f64,
    z_crit: f64,
    replications: u64,
    seed: u64,
) -> Result<PowerResult> {
    let z_crit = ensure_positive("critical z", z_crit)?;
    if replications < 2 {
        return Err(Error::domain(format!(
            "need at least 2 replications for a spread estimate, got {replications}"
        )));
    }

    let series: Vec<SeriesResult> = (0..replications)
        .into_par_iter()
        .map(|k| simulate_series(particle, state, mission, lambda_true, substream_seed(seed, k)))
        .collect::<Result<_>>()?;

    let r = replications as f64;
    let mut sum = 0.0_f64;
    for s in &series {
        sum += s.lambda_hat;
    }
    let mean_lambda_hat = sum / r;
    let mut sum_sq_dev = 0.0_f64;
    let mut detected = 0_u64;
    for s in &series {
        let dev = s.lambda_hat - mean_lambda_hat;
        sum_sq_dev += dev * dev;
        if s.z_score >= z_crit {
            detected += 1;
        }
    }

    Ok(PowerResult {
        mean_lambda_hat,
        sd_lambda_hat: (sum_sq_dev / (r - 1.0)).sqrt(),
        detection_fraction: detected as f64 / r,
        replications,
    })
}
