//! Parameter sweeps over particle radius and density: detectability ratios
//! for the gravitational and CSL models, and the non-Gaussianity onset
//! time, one row per (radius, density) grid point.
//!
//! Rows are evaluated in parallel but emitted in a fixed order — densities
//! in input order, radii ascending within each density — so sweep output is
//! byte-stable regardless of thread count.

use crate::csl::CslParams;
use crate::dp::nongaussian_time;
use crate::error::{ensure_positive, Error, Result};
use crate::particle::{make_initial_state, make_particle};
use crate::stats::{detectability_report, MissionProfile};
use rayon::prelude::*;

/// Grid and shared physics inputs for one sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Particle radii, m; strictly increasing.
    pub radii: Vec<f64>,
    /// Mass densities, kg·m⁻³; evaluated in the order given.
    pub densities: Vec<f64>,
    /// Trap angular frequency at release, rad/s.
    pub omega: f64,
    /// Mean thermal occupation of the trapped state.
    pub occupancy_nbar: f64,
    /// Momentum squeezing factor (≥ 1).
    pub squeeze_s: f64,
    /// Series/expansion/readout configuration.
    pub mission: MissionProfile,
    /// CSL parameters; `None` leaves the CSL columns unpopulated.
    pub csl: Option<CslParams>,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::domain("sweep needs at least one radius"));
        }
        if self.densities.is_empty() {
            return Err(Error::domain("sweep needs at least one density"));
        }
        ensure_positive("first sweep radius", self.radii[0])?;
        for pair in self.radii.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::domain(format!(
                    "sweep radii must be strictly increasing, got {} m after {} m",
                    pair[1], pair[0]
                )));
            }
        }
        for &density in &self.densities {
            ensure_positive("sweep density", density)?;
        }
        Ok(())
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Particle radius, m.
    pub radius_m: f64,
    /// Mass density, kg·m⁻³.
    pub density_kg_m3: f64,
    /// Gravitational diffusion rate density, m⁻²·s⁻¹.
    pub lambda_dp: f64,
    /// CSL rate density, when CSL parameters were supplied.
    pub lambda_csl: Option<f64>,
    /// Minimum detectable rate density for the sweep mission, m⁻²·s⁻¹.
    pub lambda_min: f64,
    /// lambda_dp / lambda_min.
    pub ratio_dp: f64,
    /// lambda_csl / lambda_min, when CSL parameters were supplied.
    pub ratio_csl: Option<f64>,
    /// Non-Gaussianity onset time, s; populated only by the onset-time
    /// sweep, with `+inf` marking points where no onset occurs within the
    /// solver horizon.
    pub t_d_s: Option<f64>,
}

/// `n` log-spaced radii from `min` to `max` inclusive, both endpoints
/// exact.
pub fn log_spaced_radii(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    let min = ensure_positive("minimum radius", min)?;
    let max = ensure_positive("maximum radius", max)?;
    if max <= min {
        return Err(Error::domain(format!(
            "maximum radius ({max} m) must exceed minimum radius ({min} m)"
        )));
    }
    if n < 2 {
        return Err(Error::domain(format!(
            "need at least 2 radius points to span a range, got {n}"
        )));
    }
    let log_min = min.ln();
    let log_max = max.ln();
    let step = (log_max - log_min) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == 0 {
                min
            } else if i == n - 1 {
                max
            } else {
                (log_min + i as f64 * step).exp()
            }
        })
        .collect())
}

fn with_grid_context(radius: f64, density: f64, err: Error) -> Error {
    let context =
        format!("at radius {radius:e} m, density {density:e} kg/m^3: {err}");
    match err {
        Error::Domain(_) => Error::Domain(context),
        Error::Solver(_) => Error::Solver(context),
        Error::NoDecoherenceWithinHorizon { .. } => err,
    }
}

fn evaluate_grid(
    spec: &SweepSpec,
    with_onset_time: bool,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points: Vec<(f64, f64)> = spec
        .densities
        .iter()
        .flat_map(|&density| spec.radii.iter().map(move |&radius| (radius, density)))
        .collect();

    points
        .into_par_iter()
        .map(|(radius, density)| {
            let row = || -> Result<SweepRow> {
                let particle = make_particle(radius, density)?;
                let state =
                    make_initial_state(&particle, spec.omega, spec.occupancy_nbar, spec.squeeze_s)?;
                let report = detectability_report(
                    &particle,
                    &state,
                    &spec.mission,
                    spec.csl.as_ref(),
                    1.0,
                )?;
                let t_d_s = if with_onset_time {
                    match nongaussian_time(&particle, &state) {
                        Ok(t) => Some(t),
                        Err(Error::NoDecoherenceWithinHorizon { .. }) => Some(f64::INFINITY),
                        Err(e) => return Err(e),
                    }
                } else {
                    None
                };
                Ok(SweepRow {
                    radius_m: radius,
                    density_kg_m3: density,
                    lambda_dp: report.lambda_dp,
                    lambda_csl: report.lambda_csl,
                    lambda_min: report.lambda_min,
                    ratio_dp: report.ratio_dp,
                    ratio_csl: report.ratio_csl,
                    t_d_s,
                })
            };
            row().map_err(|e| with_grid_context(radius, density, e))
        })
        .collect()
}

/// Evaluates detectability ratios over the grid: one row per
/// (radius, density), ordered by density then radius.
pub fn sweep_ratios(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    evaluate_grid(spec, false)
}

/// Evaluates the non-Gaussianity onset time over the grid, alongside the
/// detectability columns. Grid points where no onset occurs within the
/// solver horizon carry `t_d_s = +inf` instead of aborting the sweep.
pub fn sweep_decoherence_time(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    evaluate_grid(spec, true)
}
