//! Free-expansion variance law with a generic localization-rate parameter Λ.
//!
//! After release from the trap, a 1D wave packet subject to a long-wavelength
//! position-localization process of rate density Λ (units m⁻²·s⁻¹) expands as
//!
//! ```text
//! ⟨x̂²(t)⟩ = ⟨x̂²(0)⟩ + (t²/m²)·⟨p̂²(0)⟩ + 2Λħ²t³/(3m²)
//! ```
//!
//! The cubic term is the double time integral of the momentum diffusion
//! d⟨p̂²⟩/dt = 2Λħ² that such a localization process produces; dividing by m²
//! (not m³) is the only dimensionally consistent choice for Λ in m⁻²·s⁻¹, and
//! is the convention used everywhere in this crate (it is also what makes the
//! detection-threshold formula in [`crate::stats`] come out exactly).
//! The coherent width b(t) is the Λ = 0 standard deviation and serves as the
//! superposition size fed to the self-energy model.

use crate::constants::HBAR;
use crate::error::{ensure_non_negative, Error, Result};
use crate::particle::{InitialState, TestParticle};

/// Which model a localization rate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaSource {
    /// Gravitationally induced momentum diffusion (Diósi–Penrose).
    Dp,
    /// Continuous spontaneous localization.
    Csl,
    /// User-supplied rate.
    Custom,
    /// No decoherence (Λ = 0 by construction).
    None,
}

/// A localization rate density Λ tagged with the model it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceSpec {
    /// Rate density Λ, m⁻²·s⁻¹ (≥ 0).
    pub lambda: f64,
    /// Provenance tag.
    pub source: LambdaSource,
}

impl DecoherenceSpec {
    /// Builds a spec, enforcing Λ ≥ 0 and that [`LambdaSource::None`]
    /// carries exactly Λ = 0.
    pub fn new(lambda: f64, source: LambdaSource) -> Result<Self> {
        ensure_non_negative("decoherence rate density", lambda)?;
        if source == LambdaSource::None && lambda != 0.0 {
            return Err(Error::domain(format!(
                "source `none` requires a zero rate density, got {lambda}"
            )));
        }
        Ok(DecoherenceSpec { lambda, source })
    }

    /// The no-decoherence spec (Λ = 0).
    pub fn none() -> Self {
        DecoherenceSpec {
            lambda: 0.0,
            source: LambdaSource::None,
        }
    }

    /// A user-supplied rate density.
    pub fn custom(lambda: f64) -> Result<Self> {
        Self::new(lambda, LambdaSource::Custom)
    }
}

fn ensure_time(t: f64) -> Result<f64> {
    ensure_non_negative("expansion time", t)
}

/// The ballistic (Λ = 0) variance ⟨x̂²(0)⟩ + t²·⟨p̂²(0)⟩/m².
///
/// Shared by [`variance_at`] and [`coherent_width`] so that
/// `coherent_width(t)²` and `variance_at(Λ=0, t)` are the same float, not
/// merely close.
fn ballistic_variance(state: &InitialState, particle: &TestParticle, t: f64) -> f64 {
    let m = particle.mass_m;
    state.x_var0 + (t * t / (m * m)) * state.p_var0
}

/// Evaluates the wave-packet variance ⟨x̂²(t)⟩ under the localization rate
/// in `deco`.
pub fn variance_at(
    state: &InitialState,
    particle: &TestParticle,
    deco: &DecoherenceSpec,
    t: f64,
) -> Result<f64> {
    let t = ensure_time(t)?;
    let m = particle.mass_m;
    let diffusion = (2.0 * deco.lambda * HBAR * HBAR / (3.0 * (m * m))) * (t * t * t);
    Ok(ballistic_variance(state, particle, t) + diffusion)
}

/// The coherent wave-packet width b(t) = sqrt(⟨x̂²(t)⟩ at Λ = 0), m.
pub fn coherent_width(state: &InitialState, particle: &TestParticle, t: f64) -> Result<f64> {
    let t = ensure_time(t)?;
    Ok(ballistic_variance(state, particle, t).sqrt())
}
