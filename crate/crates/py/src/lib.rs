//! Python bindings for the free-fall decoherence toolkit.
//!
//! The module mirrors the core API: build a `Particle`, prepare its trap
//! `State`, describe the measurement `Mission`, then query rates,
//! thresholds, onset times, or run the Monte Carlo simulator.
//!
//! ```python
//! import freefall_py as ff
//!
//! p = ff.Particle(200e-9, 2200.0)
//! s = ff.State(p, omega_rad_s=1e5)
//! m = ff.Mission(2.592e6, 100.0, sigma_meas_m=1e-7)
//! print(ff.lambda_dp(p) / ff.lambda_min(s, m))   # far below 1
//! print(ff.simulate_series(p, s, m, 0.0, seed=1).z_score)
//! ```
//!
//! Physical preconditions surface as `ValueError`; solver failures
//! (including onsets beyond the search horizon) as `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(err: freefall_core::Error) -> PyErr {
    match err {
        freefall_core::Error::Domain(_) => PyValueError::new_err(err.to_string()),
        freefall_core::Error::Solver(_)
        | freefall_core::Error::NoDecoherenceWithinHorizon { .. } => {
            PyRuntimeError::new_err(err.to_string())
        }
    }
}

/// Uniform sphere of given radius and mass density.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Particle {
    inner: freefall_core::TestParticle,
}

#[pymethods]
impl Particle {
    #[new]
    fn new(radius_m: f64, density_kg_m3: f64) -> PyResult<Self> {
        let inner = freefall_core::make_particle(radius_m, density_kg_m3).map_err(to_py)?;
        Ok(Particle { inner })
    }

    #[getter]
    fn radius_m(&self) -> f64 {
        self.inner.radius_a
    }

    #[getter]
    fn density_kg_m3(&self) -> f64 {
        self.inner.density_rho
    }

    /// Mass (4/3)·π·a³·ρ, kg.
    #[getter]
    fn mass_kg(&self) -> f64 {
        self.inner.mass_m
    }

    fn __repr__(&self) -> String {
        format!(
            "Particle(radius_m={:e}, density_kg_m3={:e})",
            self.inner.radius_a, self.inner.density_rho
        )
    }
}

/// Second moments of the trapped centre-of-mass state at release: a trap of
/// angular frequency `omega_rad_s`, mean occupancy `nbar`, and momentum
/// squeezing `squeeze` ≥ 1.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct State {
    inner: freefall_core::InitialState,
}

#[pymethods]
impl State {
    #[new]
    #[pyo3(signature = (particle, omega_rad_s, nbar = 0.0, squeeze = 1.0))]
    fn new(particle: &Particle, omega_rad_s: f64, nbar: f64, squeeze: f64) -> PyResult<Self> {
        let inner =
            freefall_core::make_initial_state(&particle.inner, omega_rad_s, nbar, squeeze)
                .map_err(to_py)?;
        Ok(State { inner })
    }

    #[getter]
    fn omega_rad_s(&self) -> f64 {
        self.inner.omega
    }

    #[getter]
    fn nbar(&self) -> f64 {
        self.inner.occupancy_nbar
    }

    #[getter]
    fn squeeze(&self) -> f64 {
        self.inner.squeeze_s
    }

    /// Initial position variance ⟨x²(0)⟩, m².
    #[getter]
    fn x_var0(&self) -> f64 {
        self.inner.x_var0
    }

    /// Initial momentum variance ⟨p²(0)⟩, kg²·m²·s⁻².
    #[getter]
    fn p_var0(&self) -> f64 {
        self.inner.p_var0
    }

    fn __repr__(&self) -> String {
        format!(
            "State(omega_rad_s={:e}, nbar={}, squeeze={})",
            self.inner.omega, self.inner.occupancy_nbar, self.inner.squeeze_s
        )
    }
}

/// One measurement series: total budget `series_s`, per-run expansion time
/// `expansion_s`, and 1σ readout error `sigma_meas_m`.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Mission {
    inner: freefall_core::MissionProfile,
}

#[pymethods]
impl Mission {
    #[new]
    #[pyo3(signature = (series_s, expansion_s, sigma_meas_m = 0.0))]
    fn new(series_s: f64, expansion_s: f64, sigma_meas_m: f64) -> PyResult<Self> {
        let inner = freefall_core::MissionProfile::new(series_s, expansion_s, sigma_meas_m)
            .map_err(to_py)?;
        Ok(Mission { inner })
    }

    #[getter]
    fn series_s(&self) -> f64 {
        self.inner.series_time_t
    }

    #[getter]
    fn expansion_s(&self) -> f64 {
        self.inner.expansion_time_t
    }

    #[getter]
    fn sigma_meas_m(&self) -> f64 {
        self.inner.sigma_meas
    }

    /// Runs per series, ⌊series/expansion⌋.
    #[getter]
    fn n_runs(&self) -> u64 {
        self.inner.n_runs()
    }

    fn __repr__(&self) -> String {
        format!(
            "Mission(series_s={:e}, expansion_s={:e}, sigma_meas_m={:e})",
            self.inner.series_time_t, self.inner.expansion_time_t, self.inner.sigma_meas
        )
    }
}

/// Spontaneous-localization model parameters (rate, localization radius,
/// reference mass).
#[pyclass(frozen, skip_from_py_object, name = "CslParams")]
#[derive(Clone)]
struct PyCslParams {
    inner: freefall_core::CslParams,
}

#[pymethods]
impl PyCslParams {
    #[new]
    #[pyo3(signature = (
        rate_hz = freefall_core::csl::DEFAULT_RATE_HZ,
        rc_m = freefall_core::csl::DEFAULT_RC_M,
        reference_mass_kg = freefall_core::AMU,
    ))]
    fn new(rate_hz: f64, rc_m: f64, reference_mass_kg: f64) -> PyResult<Self> {
        let inner =
            freefall_core::CslParams::new(rate_hz, rc_m, reference_mass_kg).map_err(to_py)?;
        Ok(PyCslParams { inner })
    }

    #[getter]
    fn rate_hz(&self) -> f64 {
        self.inner.rate_lambda0
    }

    #[getter]
    fn rc_m(&self) -> f64 {
        self.inner.r_c
    }

    #[getter]
    fn reference_mass_kg(&self) -> f64 {
        self.inner.reference_mass
    }

    fn __repr__(&self) -> String {
        format!(
            "CslParams(rate_hz={:e}, rc_m={:e}, reference_mass_kg={:e})",
            self.inner.rate_lambda0, self.inner.r_c, self.inner.reference_mass
        )
    }
}

/// Gravitational quantities at one superposition size: self-energy `e_g`
/// (J), decay time `tau_g` (s), diffusion rate density `lambda_dp`
/// (m⁻²·s⁻¹), and heating as `heat_w` (W) / `heat_k_per_s` (K/s).
#[pyclass(frozen, get_all, name = "DpResult")]
struct PyDpResult {
    e_g: f64,
    tau_g: f64,
    lambda_dp: f64,
    heat_w: f64,
    heat_k_per_s: f64,
}

#[pymethods]
impl PyDpResult {
    fn __repr__(&self) -> String {
        format!(
            "DpResult(e_g={:e}, tau_g={:e}, lambda_dp={:e}, heat_w={:e}, heat_k_per_s={:e})",
            self.e_g, self.tau_g, self.lambda_dp, self.heat_w, self.heat_k_per_s
        )
    }
}

/// One simulated measurement series: sample variance of the N positions,
/// the rate estimate recovered from it, and its z-score against the
/// zero-rate expectation.
#[pyclass(frozen, get_all, name = "SeriesResult")]
struct PySeriesResult {
    var_hat: f64,
    lambda_hat: f64,
    z_score: f64,
    n_runs: u64,
    seed: u64,
}

#[pymethods]
impl PySeriesResult {
    fn __repr__(&self) -> String {
        format!(
            "SeriesResult(var_hat={:e}, lambda_hat={:e}, z_score={:.3}, n_runs={}, seed={})",
            self.var_hat, self.lambda_hat, self.z_score, self.n_runs, self.seed
        )
    }
}

/// Aggregate over replicated series: estimator mean/spread and the
/// fraction of replications whose z-score cleared the detection threshold.
#[pyclass(frozen, get_all, name = "PowerResult")]
struct PyPowerResult {
    mean_lambda_hat: f64,
    sd_lambda_hat: f64,
    detection_fraction: f64,
    replications: u64,
}

#[pymethods]
impl PyPowerResult {
    fn __repr__(&self) -> String {
        format!(
            "PowerResult(mean_lambda_hat={:e}, sd_lambda_hat={:e}, detection_fraction={}, replications={})",
            self.mean_lambda_hat, self.sd_lambda_hat, self.detection_fraction, self.replications
        )
    }
}

/// Model rates against the statistical detection threshold. `lambda_csl`
/// and `ratio_csl` are `None` unless CSL parameters were supplied.
#[pyclass(frozen, get_all, name = "Detectability")]
struct PyDetectability {
    z_multiplier: f64,
    lambda_min: f64,
    lambda_dp: f64,
    ratio_dp: f64,
    lambda_csl: Option<f64>,
    ratio_csl: Option<f64>,
}

#[pymethods]
impl PyDetectability {
    fn __repr__(&self) -> String {
        format!(
            "Detectability(lambda_min={:e}, ratio_dp={:e}, ratio_csl={:?})",
            self.lambda_min, self.ratio_dp, self.ratio_csl
        )
    }
}

/// One sweep grid point. `t_d_s` is set only by the onset-time sweep and is
/// `inf` where no onset occurs within the solver horizon.
#[pyclass(frozen, get_all, name = "SweepPoint")]
struct PySweepPoint {
    radius_m: f64,
    density_kg_m3: f64,
    lambda_dp: f64,
    lambda_csl: Option<f64>,
    lambda_min: f64,
    ratio_dp: f64,
    ratio_csl: Option<f64>,
    t_d_s: Option<f64>,
}

#[pymethods]
impl PySweepPoint {
    fn __repr__(&self) -> String {
        format!(
            "SweepPoint(radius_m={:e}, density_kg_m3={:e}, ratio_dp={:e}, t_d_s={:?})",
            self.radius_m, self.density_kg_m3, self.ratio_dp, self.t_d_s
        )
    }
}

impl From<freefall_core::SweepRow> for PySweepPoint {
    fn from(row: freefall_core::SweepRow) -> Self {
        PySweepPoint {
            radius_m: row.radius_m,
            density_kg_m3: row.density_kg_m3,
            lambda_dp: row.lambda_dp,
            lambda_csl: row.lambda_csl,
            lambda_min: row.lambda_min,
            ratio_dp: row.ratio_dp,
            ratio_csl: row.ratio_csl,
            t_d_s: row.t_d_s,
        }
    }
}

/// Gravitational momentum-diffusion rate density Λ = Gm²/(2a³ħ), m⁻²·s⁻¹.
#[pyfunction]
fn lambda_dp(particle: &Particle) -> f64 {
    freefall_core::lambda_dp(&particle.inner)
}

/// Spontaneous-localization rate density for the particle, m⁻²·s⁻¹.
#[pyfunction]
fn lambda_csl(particle: &Particle, params: &PyCslParams) -> f64 {
    freefall_core::lambda_csl(&particle.inner, &params.inner)
}

/// Uniform-sphere form factor f(x), x = radius / localization radius.
#[pyfunction]
fn sphere_form_factor(x: f64) -> f64 {
    freefall_core::sphere_form_factor(x)
}

/// Gravitational self-energy of a superposition of size `separation_m`, J.
#[pyfunction]
fn grav_self_energy(particle: &Particle, separation_m: f64) -> PyResult<f64> {
    freefall_core::grav_self_energy(&particle.inner, separation_m).map_err(to_py)
}

/// All gravitational quantities at one superposition size.
#[pyfunction]
fn dp_result(particle: &Particle, separation_m: f64) -> PyResult<PyDpResult> {
    let r = freefall_core::dp_result(&particle.inner, separation_m).map_err(to_py)?;
    Ok(PyDpResult {
        e_g: r.e_g,
        tau_g: r.tau_g,
        lambda_dp: r.lambda_dp,
        heat_w: r.heat_w,
        heat_k_per_s: r.heat_k_per_s,
    })
}

/// The time at which gravitational decoherence outruns coherent expansion:
/// the root of ħ/E_G(b(t)) = t. Raises `RuntimeError` when no onset occurs
/// within the search horizon.
#[pyfunction]
fn nongaussian_time(particle: &Particle, state: &State) -> PyResult<f64> {
    freefall_core::nongaussian_time(&particle.inner, &state.inner).map_err(to_py)
}

/// Position variance after free expansion for `t_s` seconds under a
/// localization rate density `lambda_m2s`.
#[pyfunction]
fn variance_at(state: &State, particle: &Particle, lambda_m2s: f64, t_s: f64) -> PyResult<f64> {
    let spec = freefall_core::DecoherenceSpec::custom(lambda_m2s).map_err(to_py)?;
    freefall_core::variance_at(&state.inner, &particle.inner, &spec, t_s).map_err(to_py)
}

/// Coherent (zero-decoherence) wave-packet standard deviation after `t_s`
/// seconds of free expansion, m.
#[pyfunction]
fn coherent_width(state: &State, particle: &Particle, t_s: f64) -> PyResult<f64> {
    freefall_core::coherent_width(&state.inner, &particle.inner, t_s).map_err(to_py)
}

/// Minimum rate density distinguishable at one standard error of the
/// variance estimate, m⁻²·s⁻¹.
#[pyfunction]
fn lambda_min(state: &State, mission: &Mission) -> f64 {
    freefall_core::lambda_min(&state.inner, &mission.inner)
}

/// Expansion time past which readout noise stops dominating the variance
/// uncertainty. Raises `RuntimeError` if noise dominates the whole series.
#[pyfunction]
fn measurement_crossover_time(state: &State, particle: &Particle, mission: &Mission) -> PyResult<f64> {
    freefall_core::measurement_crossover_time(&state.inner, &particle.inner, &mission.inner)
        .map_err(to_py)
}

/// Detectability of the gravitational (and optionally CSL) model against
/// the statistical threshold scaled by `z_multiplier`.
#[pyfunction]
#[pyo3(signature = (particle, state, mission, csl = None, z_multiplier = 1.0))]
fn detectability(
    particle: &Particle,
    state: &State,
    mission: &Mission,
    csl: Option<&PyCslParams>,
    z_multiplier: f64,
) -> PyResult<PyDetectability> {
    let report = freefall_core::detectability_report(
        &particle.inner,
        &state.inner,
        &mission.inner,
        csl.map(|p| &p.inner),
        z_multiplier,
    )
    .map_err(to_py)?;
    Ok(PyDetectability {
        z_multiplier: report.z_multiplier,
        lambda_min: report.lambda_min,
        lambda_dp: report.lambda_dp,
        ratio_dp: report.ratio_dp,
        lambda_csl: report.lambda_csl,
        ratio_csl: report.ratio_csl,
    })
}

/// Simulates one measurement series of N = ⌊series/expansion⌋ runs at the
/// given true rate density. Deterministic in `seed`.
#[pyfunction]
fn simulate_series(
    py: Python<'_>,
    particle: &Particle,
    state: &State,
    mission: &Mission,
    lambda_true: f64,
    seed: u64,
) -> PyResult<PySeriesResult> {
    let (particle, state, mission) = (particle.inner, state.inner, mission.inner);
    let r = py
        .detach(|| freefall_core::simulate_series(&particle, &state, &mission, lambda_true, seed))
        .map_err(to_py)?;
    Ok(PySeriesResult {
        var_hat: r.var_hat,
        lambda_hat: r.lambda_hat,
        z_score: r.z_score,
        n_runs: r.n_runs,
        seed: r.seed,
    })
}

/// Replicates `simulate_series` over derived substream seeds and reports
/// estimator spread and detection fraction at `z_crit`. Runs in parallel;
/// results are independent of thread count.
#[pyfunction]
fn detection_power(
    py: Python<'_>,
    particle: &Particle,
    state: &State,
    mission: &Mission,
    lambda_true: f64,
    z_crit: f64,
    replications: u64,
    seed: u64,
) -> PyResult<PyPowerResult> {
    let (particle, state, mission) = (particle.inner, state.inner, mission.inner);
    let r = py
        .detach(|| {
            freefall_core::detection_power(
                &particle,
                &state,
                &mission,
                lambda_true,
                z_crit,
                replications,
                seed,
            )
        })
        .map_err(to_py)?;
    Ok(PyPowerResult {
        mean_lambda_hat: r.mean_lambda_hat,
        sd_lambda_hat: r.sd_lambda_hat,
        detection_fraction: r.detection_fraction,
        replications: r.replications,
    })
}

/// The k-th independent seed derived from a master seed; injective in `k`.
#[pyfunction]
fn substream_seed(seed: u64, index: u64) -> u64 {
    freefall_core::substream_seed(seed, index)
}

/// `n` log-spaced radii from `min_m` to `max_m` inclusive, endpoints exact.
#[pyfunction]
fn log_spaced_radii(min_m: f64, max_m: f64, n: usize) -> PyResult<Vec<f64>> {
    freefall_core::log_spaced_radii(min_m, max_m, n).map_err(to_py)
}

fn sweep_spec(
    radii: Vec<f64>,
    densities: Vec<f64>,
    omega_rad_s: f64,
    mission: &Mission,
    nbar: f64,
    squeeze: f64,
    csl: Option<&PyCslParams>,
) -> freefall_core::SweepSpec {
    freefall_core::SweepSpec {
        radii,
        densities,
        omega: omega_rad_s,
        occupancy_nbar: nbar,
        squeeze_s: squeeze,
        mission: mission.inner,
        csl: csl.map(|p| p.inner),
    }
}

/// Detectability ratios over a radius/density grid; one point per
/// (radius, density), densities in input order, radii ascending.
#[pyfunction]
#[pyo3(signature = (radii, densities, omega_rad_s, mission, nbar = 0.0, squeeze = 1.0, csl = None))]
#[allow(clippy::too_many_arguments)]
fn sweep_ratios(
    py: Python<'_>,
    radii: Vec<f64>,
    densities: Vec<f64>,
    omega_rad_s: f64,
    mission: &Mission,
    nbar: f64,
    squeeze: f64,
    csl: Option<&PyCslParams>,
) -> PyResult<Vec<PySweepPoint>> {
    let spec = sweep_spec(radii, densities, omega_rad_s, mission, nbar, squeeze, csl);
    let rows = py
        .detach(|| freefall_core::sweep_ratios(&spec))
        .map_err(to_py)?;
    Ok(rows.into_iter().map(PySweepPoint::from).collect())
}

/// Decoherence onset times over a radius/density grid; `t_d_s` is `inf`
/// where no onset occurs within the solver horizon.
#[pyfunction]
#[pyo3(signature = (radii, densities, omega_rad_s, mission, nbar = 0.0, squeeze = 1.0))]
fn sweep_decoherence_time(
    py: Python<'_>,
    radii: Vec<f64>,
    densities: Vec<f64>,
    omega_rad_s: f64,
    mission: &Mission,
    nbar: f64,
    squeeze: f64,
) -> PyResult<Vec<PySweepPoint>> {
    let spec = sweep_spec(radii, densities, omega_rad_s, mission, nbar, squeeze, None);
    let rows = py
        .detach(|| freefall_core::sweep_decoherence_time(&spec))
        .map_err(to_py)?;
    Ok(rows.into_iter().map(PySweepPoint::from).collect())
}

#[pymodule]
fn freefall_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Particle>()?;
    m.add_class::<State>()?;
    m.add_class::<Mission>()?;
    m.add_class::<PyCslParams>()?;
    m.add_class::<PyDpResult>()?;
    m.add_class::<PySeriesResult>()?;
    m.add_class::<PyPowerResult>()?;
    m.add_class::<PyDetectability>()?;
    m.add_class::<PySweepPoint>()?;

    m.add_function(wrap_pyfunction!(lambda_dp, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_csl, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_form_factor, m)?)?;
    m.add_function(wrap_pyfunction!(grav_self_energy, m)?)?;
    m.add_function(wrap_pyfunction!(dp_result, m)?)?;
    m.add_function(wrap_pyfunction!(nongaussian_time, m)?)?;
    m.add_function(wrap_pyfunction!(variance_at, m)?)?;
    m.add_function(wrap_pyfunction!(coherent_width, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_min, m)?)?;
    m.add_function(wrap_pyfunction!(measurement_crossover_time, m)?)?;
    m.add_function(wrap_pyfunction!(detectability, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_series, m)?)?;
    m.add_function(wrap_pyfunction!(detection_power, m)?)?;
    m.add_function(wrap_pyfunction!(substream_seed, m)?)?;
    m.add_function(wrap_pyfunction!(log_spaced_radii, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_ratios, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_decoherence_time, m)?)?;

    m.add("HBAR", freefall_core::HBAR)?;
    m.add("G", freefall_core::G)?;
    m.add("K_B", freefall_core::K_B)?;
    m.add("AMU", freefall_core::AMU)?;
    m.add("SECONDS_PER_DAY", freefall_core::SECONDS_PER_DAY)?;
    Ok(())
}
