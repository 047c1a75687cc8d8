//! The spherical test mass and its initial trapped center-of-mass state.
//!
//! The test particle is a uniform dielectric sphere described by radius and
//! density. Its center-of-mass motion is prepared in a (possibly thermal,
//! possibly momentum-squeezed) harmonic-trap state; only the second moments
//! matter for the variance analysis, so the state is captured by the initial
//! position and momentum variances.

use std::f64::consts::PI;

use crate::constants::HBAR;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Uniform sphere of given radius and mass density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestParticle {
    /// Sphere radius a, m.
    pub radius_a: f64,
    /// Mass density ρ, kg·m⁻³.
    pub density_rho: f64,
    /// Mass m = (4/3)·π·a³·ρ, kg. Derived; kept consistent by construction.
    pub mass_m: f64,
}

/// Builds a [`TestParticle`], deriving its mass from radius and density.
pub fn make_particle(radius: f64, density: f64) -> Result<TestParticle> {
    let radius = ensure_positive("particle radius", radius)?;
    let density = ensure_positive("particle density", density)?;
    Ok(TestParticle {
        radius_a: radius,
        density_rho: density,
        mass_m: (4.0 / 3.0) * PI * (radius * radius * radius) * density,
    })
}

/// Second moments of the trapped center-of-mass state at release.
///
/// For a trap of angular frequency ω, mean phonon occupancy n̄, and momentum
/// squeezing factor s ≥ 1:
///
/// ```text
/// ⟨x̂²(0)⟩ = (ħ / 2mω) · (2n̄ + 1) · s²
/// ⟨p̂²(0)⟩ = (ħmω / 2) · (2n̄ + 1) / s²
/// ```
///
/// Squeezing trades position for momentum uncertainty at constant product;
/// the product satisfies the Heisenberg bound ħ²/4 with equality at n̄ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    /// Angular trap frequency ω, rad·s⁻¹.
    pub omega: f64,
    /// Mean phonon occupancy n̄ after cooling (0 = ground state).
    pub occupancy_nbar: f64,
    /// Momentum squeezing factor s ≥ 1 (1 = no squeezing).
    pub squeeze_s: f64,
    /// Initial position variance ⟨x̂²(0)⟩, m².
    pub x_var0: f64,
    /// Initial momentum variance ⟨p̂²(0)⟩, kg²·m²·s⁻².
    pub p_var0: f64,
}

/// Builds the release-time state of `particle` in a trap of angular
/// frequency `omega` with occupancy `nbar` and momentum squeezing `squeeze`.
pub fn make_initial_state(
    particle: &TestParticle,
    omega: f64,
    nbar: f64,
    squeeze: f64,
) -> Result<InitialState> {
    let omega = ensure_positive("trap angular frequency", omega)?;
    let nbar = ensure_non_negative("trap occupancy", nbar)?;
    if !squeeze.is_finite() || squeeze < 1.0 {
        return Err(Error::domain(format!(
            "squeezing factor must be finite and >= 1, got {squeeze}"
        )));
    }
    let m = particle.mass_m;
    let thermal = 2.0 * nbar + 1.0;
    Ok(InitialState {
        omega,
        occupancy_nbar: nbar,
        squeeze_s: squeeze,
        x_var0: (HBAR / (2.0 * m * omega)) * thermal * (squeeze * squeeze),
        p_var0: (HBAR * m * omega / 2.0) * thermal / (squeeze * squeeze),
    })
}
