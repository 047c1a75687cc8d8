//! Feasibility analysis for detecting gravitationally induced wave-function
//! collapse with levitated nanoparticles.
//!
//! The library models a free-fall interferometry protocol: a dielectric
//! nanosphere is prepared near the ground state of an optical trap,
//! released, allowed to expand freely for a time t, and its position is
//! measured; repeating this N times over a measurement series of duration T
//! estimates the position variance, whose anomalous t³ growth would betray
//! a position-localization process of rate density Λ. On top of the
//! variance law sit the two concrete models under test — gravitational
//! self-energy decoherence for uniform spheres and the CSL collapse model —
//! plus the statistical machinery to decide whether a given mission could
//! distinguish either from ordinary unitary expansion.
//!
//! Modules:
//!
//! - [`particle`]: sphere geometry/mass and the released trap state.
//! - [`wavepacket`]: free-expansion variance law and coherent width.
//! - [`dp`]: gravitational self-energy, decoherence timescale, diffusion
//!   rate, heating, and the non-Gaussianity onset time.
//! - [`csl`]: CSL rate density for a homogeneous sphere.
//! - [`stats`]: detection thresholds, crossover times, detectability
//!   reports.
//! - [`simulate`]: seeded Monte Carlo of whole measurement series.
//! - [`sweep`]: radius/density parameter sweeps.
//! - [`constants`], [`solve`], [`error`]: shared plumbing.
//!
//! All quantities are SI; angles in radians, temperatures in kelvin.
//! Every stochastic path is reproducible: one 64-bit seed fixes all
//! outputs bit-for-bit regardless of thread count.

pub mod constants;
pub mod csl;
pub mod dp;
pub mod error;
pub mod particle;
pub mod simulate;
pub mod solve;
pub mod stats;
pub mod sweep;
pub mod wavepacket;

pub use constants::{constants, PhysicalConstants, AMU, G, HBAR, K_B, SECONDS_PER_DAY};
pub use csl::{lambda_csl, sphere_form_factor, CslParams};
pub use dp::{
    decoherence_timescale, dp_heating, dp_result, grav_self_energy, lambda_dp, nongaussian_time,
    pairwise_decoherence_rate, DpResult, HeatingRate,
};
pub use error::{Error, Result, SOLVER_HORIZON_S};
pub use particle::{make_initial_state, make_particle, InitialState, TestParticle};
pub use simulate::{detection_power, simulate_series, substream_seed, PowerResult, SeriesResult};
pub use stats::{
    detectability_report, fractional_variance_uncertainty, lambda_min,
    measurement_crossover_time, DetectabilityReport, MissionProfile,
};
pub use sweep::{log_spaced_radii, sweep_decoherence_time, sweep_ratios, SweepRow, SweepSpec};
pub use wavepacket::{coherent_width, variance_at, DecoherenceSpec, LambdaSource};
