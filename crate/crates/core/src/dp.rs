//! Diósi–Penrose (DP) gravitational decoherence for uniform spheres.
//!
//! A center-of-mass superposition of size b of a uniform sphere (radius a,
//! mass m) carries a gravitational self-energy E_G(b) — the difference
//! between the mutual gravitational energy of the two branch mass
//! distributions at separation zero and at separation b. Superpositions decay
//! on the timescale τ_G = ħ/E_G. In the long-wavelength limit the same
//! physics acts as momentum diffusion with rate density
//! Λ_DP = Gm²/(2a³ħ), which heats the motion at mħG/(2a³) per second.
//!
//! The self-energy is expressed through the overlap parameter λ = b/(2a):
//! the spheres overlap for λ < 1 and are disjoint for λ > 1. The two-branch
//! closed form used here is the only λ-convention whose disjoint branch
//! reproduces the exact sphere–sphere result (6/5)Gm²/a − Gm²/b, which fixes
//! λ = b/(2a); the polynomial and far-field branches match in value and
//! slope at λ = 1.

use crate::constants::{G, HBAR, K_B};
use crate::error::{ensure_non_negative, Error, Result, SOLVER_HORIZON_S};
use crate::particle::{InitialState, TestParticle};
use crate::solve::bisect;
use crate::wavepacket::coherent_width;

/// Relative bracket tolerance for the onset-time bisection.
const ONSET_REL_TOL: f64 = 1e-12;
/// Iteration cap for the onset-time bisection.
const ONSET_MAX_ITER: u32 = 200;

/// Bundle of the DP quantities for one particle and superposition size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpResult {
    /// Gravitational self-energy E_G(b), J.
    pub e_g: f64,
    /// Decay timescale τ_G = ħ/E_G, s (infinite when E_G = 0).
    pub tau_g: f64,
    /// Momentum-diffusion rate density Λ_DP, m⁻²·s⁻¹.
    pub lambda_dp: f64,
    /// Heating power mħG/(2a³), W.
    pub heat_w: f64,
    /// Heating rate in temperature units, heat_w / k_B, K·s⁻¹.
    pub heat_k_per_s: f64,
}

/// Heating produced by DP momentum diffusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatingRate {
    /// 1D energy gain rate, W.
    pub power_w: f64,
    /// power_w / k_B, K·s⁻¹.
    pub kelvin_per_s: f64,
}

/// Self-energy of the overlapping branches (0 ≤ λ ≤ 1):
/// (Gm²/a)·(2λ² − (3/2)λ³ + (1/5)λ⁵).
///
/// Public so branch-matching tests can evaluate each branch on its own.
pub fn self_energy_overlap(particle: &TestParticle, lam: f64) -> f64 {
    let pref = particle.mass_m * particle.mass_m * G / particle.radius_a;
    let l2 = lam * lam;
    pref * (2.0 * l2 - 1.5 * l2 * lam + 0.2 * l2 * l2 * lam)
}

/// Self-energy of disjoint branches (λ ≥ 1): (Gm²/a)·(6/5 − 1/(2λ)).
pub fn self_energy_disjoint(particle: &TestParticle, lam: f64) -> f64 {
    let pref = particle.mass_m * particle.mass_m * G / particle.radius_a;
    pref * (1.2 - 0.5 / lam)
}

/// dE_G/dλ of the overlapping branch: (Gm²/a)·(4λ − (9/2)λ² + λ⁴).
pub fn self_energy_overlap_slope(particle: &TestParticle, lam: f64) -> f64 {
    let pref = particle.mass_m * particle.mass_m * G / particle.radius_a;
    pref * (4.0 * lam - 4.5 * lam * lam + lam * lam * lam * lam)
}

/// dE_G/dλ of the disjoint branch: (Gm²/a)·(1/(2λ²)).
pub fn self_energy_disjoint_slope(particle: &TestParticle, lam: f64) -> f64 {
    let pref = particle.mass_m * particle.mass_m * G / particle.radius_a;
    pref * 0.5 / (lam * lam)
}

/// Gravitational self-energy E_G of a superposition of size `b`, J.
pub fn grav_self_energy(particle: &TestParticle, b: f64) -> Result<f64> {
    let b = ensure_non_negative("superposition size", b)?;
    let lam = b / (2.0 * particle.radius_a);
    Ok(if lam <= 1.0 {
        self_energy_overlap(particle, lam)
    } else {
        self_energy_disjoint(particle, lam)
    })
}

/// Decay timescale τ_G = ħ/E_G, s. Zero self-energy yields the documented
/// sentinel `f64::INFINITY` (no decay).
pub fn decoherence_timescale(e_g: f64) -> Result<f64> {
    if !e_g.is_finite() || e_g < 0.0 {
        return Err(Error::domain(format!(
            "self-energy must be non-negative and finite, got {e_g}"
        )));
    }
    Ok(if e_g == 0.0 { f64::INFINITY } else { HBAR / e_g })
}

/// Off-diagonal decay rate of a two-branch superposition, 1/τ_G(b) = E_G(b)/ħ,
/// s⁻¹. Diagonal elements (b = 0) never decay.
pub fn pairwise_decoherence_rate(particle: &TestParticle, b: f64) -> Result<f64> {
    Ok(grav_self_energy(particle, b)? / HBAR)
}

/// Momentum-diffusion rate density Λ_DP = Gm²/(2a³ħ), m⁻²·s⁻¹.
pub fn lambda_dp(particle: &TestParticle) -> f64 {
    let a = particle.radius_a;
    let m = particle.mass_m;
    G * m * m / (2.0 * (a * a * a) * HBAR)
}

/// Heating rate of the center-of-mass motion from DP momentum diffusion:
/// power mħG/(2a³) and, by the crate's temperature convention, power/k_B
/// in K/s.
pub fn dp_heating(particle: &TestParticle) -> HeatingRate {
    let a = particle.radius_a;
    let power = particle.mass_m * HBAR * G / (2.0 * (a * a * a));
    HeatingRate {
        power_w: power,
        kelvin_per_s: power / K_B,
    }
}

/// All DP quantities at a given superposition size `b`.
pub fn dp_result(particle: &TestParticle, b: f64) -> Result<DpResult> {
    let e_g = grav_self_energy(particle, b)?;
    let heat = dp_heating(particle);
    Ok(DpResult {
        e_g,
        tau_g: decoherence_timescale(e_g)?,
        lambda_dp: lambda_dp(particle),
        heat_w: heat.power_w,
        heat_k_per_s: heat.kelvin_per_s,
    })
}

/// The non-Gaussianity onset time t_D: the unique t > 0 at which the decay
/// time of a superposition the size of the coherently expanded wave packet
/// equals the elapsed time, ħ/E_G(b(t)) = t with b(t) = the coherent width.
///
/// Solved as t·E_G(b(t)) = ħ, whose left side is strictly increasing while
/// the right side is constant, so the root is unique. The bracket starts at
/// [1e-6 s, 1 s] and the upper end doubles until the sign changes; if the
/// equation is still unsatisfied at 1e12 s the search stops with
/// [`Error::NoDecoherenceWithinHorizon`]. For very massive particles whose
/// onset precedes 1e-6 s, the bracket extends down to t = 0, where
/// t·E_G − ħ = −ħ < 0 analytically.
pub fn nongaussian_time(particle: &TestParticle, state: &InitialState) -> Result<f64> {
    let excess = |t: f64| -> f64 {
        let b = coherent_width(state, particle, t).expect("t >= 0 inside solver");
        let e_g = if b <= 2.0 * particle.radius_a {
            self_energy_overlap(particle, b / (2.0 * particle.radius_a))
        } else {
            self_energy_disjoint(particle, b / (2.0 * particle.radius_a))
        };
        t * e_g - HBAR
    };

    let mut lo = 1e-6;
    if excess(lo) >= 0.0 {
        // Onset earlier than a microsecond: t·E_G − ħ is −ħ at t = 0, so
        // [0, 1e-6] brackets the root.
        return bisect(excess, 0.0, lo, ONSET_REL_TOL, ONSET_MAX_ITER);
    }
    let mut hi = 1.0;
    while excess(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > SOLVER_HORIZON_S {
            return Err(Error::NoDecoherenceWithinHorizon {
                horizon_s: SOLVER_HORIZON_S,
            });
        }
    }
    bisect(excess, lo, hi, ONSET_REL_TOL, ONSET_MAX_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::particle::{make_initial_state, make_particle};

    #[test]
    fn self_energy_vanishes_at_zero_separation() {
        let p = make_particle(200e-9, 2000.0).unwrap();
        assert_eq!(grav_self_energy(&p, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn branches_agree_at_touching_point() {
        // At λ = 1 (b = 2a) both closed forms give 0.7·Gm²/a:
        // 2 − 3/2 + 1/5 = 6/5 − 1/2 = 7/10.
        let p = make_particle(200e-9, 2000.0).unwrap();
        let expected = 0.7 * G * p.mass_m * p.mass_m / p.radius_a;
        let via_overlap = self_energy_overlap(&p, 1.0);
        let via_disjoint = self_energy_disjoint(&p, 1.0);
        assert!((via_overlap - expected).abs() / expected < 1e-12);
        assert!((via_disjoint - expected).abs() / expected < 1e-12);
        let e = grav_self_energy(&p, 2.0 * p.radius_a).unwrap();
        assert!((e - 1.049278929532e-36).abs() / 1.049278929532e-36 < 1e-9);
    }

    #[test]
    fn branch_slopes_agree_at_touching_point() {
        let p = make_particle(340e-9, 3100.0).unwrap();
        let expected = 0.5 * G * p.mass_m * p.mass_m / p.radius_a;
        let s1 = self_energy_overlap_slope(&p, 1.0);
        let s2 = self_energy_disjoint_slope(&p, 1.0);
        assert!((s1 - expected).abs() / expected < 1e-12);
        assert!((s2 - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn self_energy_of_separated_spheres() {
        // λ = 2 (b = 4a), a = 200 nm, ρ = 2000: (6/5 − 1/4)·Gm²/a,
        // independently 1.424021404364e-36 J.
        let p = make_particle(200e-9, 2000.0).unwrap();
        let e = grav_self_energy(&p, 4.0 * p.radius_a).unwrap();
        assert!((e - 1.424021404364e-36).abs() / 1.424021404364e-36 < 1e-9);
    }

    #[test]
    fn self_energy_saturates_at_far_field_limit() {
        let p = make_particle(200e-9, 2000.0).unwrap();
        let cap = 1.2 * G * p.mass_m * p.mass_m / p.radius_a;
        let far = grav_self_energy(&p, 1e6 * p.radius_a).unwrap();
        assert!(far < cap);
        assert!((cap - far) / cap < 1e-5);
    }

    #[test]
    fn self_energy_monotone_and_bounded() {
        let p = make_particle(500e-9, 2500.0).unwrap();
        let cap = 1.2 * G * p.mass_m * p.mass_m / p.radius_a;
        let mut prev = 0.0;
        for i in 1..=400 {
            let b = 8.0 * p.radius_a * (i as f64) / 400.0;
            let e = grav_self_energy(&p, b).unwrap();
            assert!(e > prev, "not increasing at b = {b}");
            assert!(e <= cap);
            prev = e;
        }
    }

    #[test]
    fn rejects_negative_separation() {
        let p = make_particle(200e-9, 2000.0).unwrap();
        assert!(grav_self_energy(&p, -1e-9).is_err());
    }

    #[test]
    fn timescale_is_hbar_over_energy() {
        assert_eq!(decoherence_timescale(1.054571817e-34).unwrap(), 1.0);
        assert_eq!(decoherence_timescale(0.0).unwrap(), f64::INFINITY);
        assert!(decoherence_timescale(-1e-40).is_err());
        let tau = decoherence_timescale(1.424021404364e-36).unwrap();
        assert!((tau - 7.405589647515e1).abs() / 7.405589647515e1 < 1e-9);
    }

    #[test]
    fn pairwise_rate_inverts_timescale() {
        let p = make_particle(200e-9, 2000.0).unwrap();
        assert_eq!(pairwise_decoherence_rate(&p, 0.0).unwrap(), 0.0);
        for &b in &[1e-9, 1e-7, 4e-7, 1e-5] {
            let rate = pairwise_decoherence_rate(&p, b).unwrap();
            let tau = decoherence_timescale(grav_self_energy(&p, b).unwrap()).unwrap();
            assert!((rate * tau - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn diffusion_rate_density_value() {
        // Gm²/(2a³ħ) at a = 200 nm, ρ = 2000: 1.776751800076e11 m⁻²s⁻¹.
        let p = make_particle(200e-9, 2000.0).unwrap();
        let l = lambda_dp(&p);
        assert!((l - 1.776751800076e11).abs() / 1.776751800076e11 < 1e-9);
    }

    #[test]
    fn diffusion_rate_density_scalings() {
        let p = make_particle(200e-9, 2000.0).unwrap();
        let denser = make_particle(200e-9, 4000.0).unwrap();
        let bigger = make_particle(400e-9, 2000.0).unwrap();
        assert_eq!(lambda_dp(&denser), 4.0 * lambda_dp(&p));
        assert_eq!(lambda_dp(&bigger), 8.0 * lambda_dp(&p));
    }

    #[test]
    fn heating_of_silica_sphere() {
        // mħG/(2a³) at a = 200 nm, ρ = 2200: 3.243121198170e-41 W,
        // i.e. 2.348983121829e-18 K/s.
        let p = make_particle(200e-9, 2200.0).unwrap();
        let h = dp_heating(&p);
        assert!((h.power_w - 3.243121198170e-41).abs() / 3.243121198170e-41 < 1e-9);
        assert!((h.kelvin_per_s - 2.348983121829e-18).abs() / 2.348983121829e-18 < 1e-9);
    }

    #[test]
    fn heating_consistent_with_momentum_diffusion() {
        // d⟨p²⟩/dt = 2Λħ² gives power 2Λ_DP·ħ²/(2m); exact identity with
        // the closed form mħG/(2a³).
        let p = make_particle(137e-9, 2650.0).unwrap();
        let h = dp_heating(&p);
        let via_diffusion = 2.0 * lambda_dp(&p) * HBAR * HBAR / (2.0 * p.mass_m);
        assert!((h.power_w - via_diffusion).abs() / h.power_w < 1e-12);
    }

    #[test]
    fn heating_linear_in_density() {
        let p1 = make_particle(200e-9, 1500.0).unwrap();
        let p2 = make_particle(200e-9, 3000.0).unwrap();
        assert_eq!(dp_heating(&p2).power_w, 2.0 * dp_heating(&p1).power_w);
    }

    #[test]
    fn result_bundle_is_consistent() {
        let p = make_particle(200e-9, 2000.0).unwrap();
        let b = 3.0 * p.radius_a;
        let r = dp_result(&p, b).unwrap();
        assert_eq!(r.e_g, grav_self_energy(&p, b).unwrap());
        assert!((r.tau_g * r.e_g - HBAR).abs() / HBAR < 1e-12);
        assert_eq!(r.lambda_dp, lambda_dp(&p));
        assert_eq!(r.heat_w, dp_heating(&p).power_w);
    }

    #[test]
    fn onset_micron_sphere_dense() {
        // Bisection oracle: 3.0775644289 s; small-overlap analytic limit
        // (3/(πGρω))^{1/3} = 3.0587 s within 5%.
        let p = make_particle(1e-6, 5000.0).unwrap();
        let s = make_initial_state(&p, 1e5, 0.0, 1.0).unwrap();
        let td = nongaussian_time(&p, &s).unwrap();
        assert!((td - 3.0775644289).abs() / 3.0775644289 < 1e-8);
        let analytic = (3.0 / (std::f64::consts::PI * G * 5000.0 * 1e5)).powf(1.0 / 3.0);
        assert!((td - analytic).abs() / analytic < 0.05);
    }

    #[test]
    fn onset_micron_sphere_light() {
        // Bisection oracle: 4.2074909410 s; ratio to the ρ = 5000 case is
        // (2000/5000)^{-1/3} ≈ 1.357 within 5%.
        let p = make_particle(1e-6, 2000.0).unwrap();
        let s = make_initial_state(&p, 1e5, 0.0, 1.0).unwrap();
        let td = nongaussian_time(&p, &s).unwrap();
        assert!((td - 4.2074909410).abs() / 4.2074909410 < 1e-8);
        let dense = make_particle(1e-6, 5000.0).unwrap();
        let sd = make_initial_state(&dense, 1e5, 0.0, 1.0).unwrap();
        let ratio = td / nongaussian_time(&dense, &sd).unwrap();
        let expected = 2.5f64.powf(1.0 / 3.0);
        assert!((ratio - expected).abs() / expected < 0.05);
    }

    #[test]
    fn onset_small_sphere_saturated_regime() {
        // At a = 200 nm, ρ = 2000 the packet is far wider than the sphere at
        // onset (λ ≈ 41), so t_D ≈ 5ħa/(6Gm²) = 58.63 s; bisection oracle
        // 59.221781037 s, within 10% of the saturated closed form.
        let p = make_particle(200e-9, 2000.0).unwrap();
        let s = make_initial_state(&p, 1e5, 0.0, 1.0).unwrap();
        let td = nongaussian_time(&p, &s).unwrap();
        assert!((td - 59.221781037).abs() / 59.221781037 < 1e-8);
        let saturated = 5.0 * HBAR * p.radius_a / (6.0 * G * p.mass_m * p.mass_m);
        assert!((td - saturated).abs() / saturated < 0.10);
    }

    #[test]
    fn onset_residual_is_tiny() {
        for (a, rho) in [(200e-9, 2000.0), (1e-6, 5000.0), (500e-9, 3000.0)] {
            let p = make_particle(a, rho).unwrap();
            let s = make_initial_state(&p, 1e5, 0.0, 1.0).unwrap();
            let td = nongaussian_time(&p, &s).unwrap();
            let b = coherent_width(&s, &p, td).unwrap();
            let residual = HBAR / grav_self_energy(&p, b).unwrap() - td;
            assert!(residual.abs() < 1e-9 * td);
        }
    }

    #[test]
    fn onset_monotone_in_density_and_frequency() {
        // Heavier or faster-expanding packets decohere earlier.
        let omegas = [3e4, 6e4, 1e5, 3e5, 1e6];
        let rhos = [1500.0, 2000.0, 3000.0, 4200.0, 5000.0];
        for &a in &[400e-9, 1e-6] {
            for w in omegas.windows(2) {
                for r in rhos.windows(2) {
                    let p_lo = make_particle(a, r[0]).unwrap();
                    let p_hi = make_particle(a, r[1]).unwrap();
                    let td_rho_lo =
                        nongaussian_time(&p_lo, &make_initial_state(&p_lo, w[0], 0.0, 1.0).unwrap())
                            .unwrap();
                    let td_rho_hi =
                        nongaussian_time(&p_hi, &make_initial_state(&p_hi, w[0], 0.0, 1.0).unwrap())
                            .unwrap();
                    assert!(td_rho_hi <= td_rho_lo);
                    let td_w_hi =
                        nongaussian_time(&p_lo, &make_initial_state(&p_lo, w[1], 0.0, 1.0).unwrap())
                            .unwrap();
                    assert!(td_w_hi <= td_rho_lo);
                }
            }
        }
    }

    #[test]
    fn onset_unreachable_for_feeble_masses() {
        // A 1 nm sphere at gas density: E_G stays so small that even at the
        // 1e12 s horizon decoherence has not set in.
        let p = make_particle(1e-9, 1.0).unwrap();
        let s = make_initial_state(&p, 1e5, 0.0, 1.0).unwrap();
        match nongaussian_time(&p, &s) {
            Err(Error::NoDecoherenceWithinHorizon { horizon_s }) => {
                assert_eq!(horizon_s, SOLVER_HORIZON_S);
            }
            other => panic!("expected horizon error, got {other:?}"),
        }
    }

    #[test]
    fn onset_before_microsecond_for_enormous_masses() {
        // A millimetre gold-density sphere in an ultraweak trap: the packet
        // is already wide at release, the onset precedes the nominal 1e-6 s
        // bracket start (bisection oracle: 7.1537834878e-7 s), and the
        // downward bracket extension is exercised.
        let p = make_particle(1e-3, 20000.0).unwrap();
        let s = make_initial_state(&p, 1e-12, 0.0, 1.0).unwrap();
        let td = nongaussian_time(&p, &s).unwrap();
        assert!(td > 0.0 && td < 1e-6);
        assert!((td - 7.1537834878e-7).abs() / 7.1537834878e-7 < 1e-8);
        let b = coherent_width(&s, &p, td).unwrap();
        let residual = HBAR / grav_self_energy(&p, b).unwrap() - td;
        assert!(residual.abs() < 1e-9 * td);
    }
}
