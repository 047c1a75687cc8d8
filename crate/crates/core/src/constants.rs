//! Physical constants in SI units — the single authoritative source for
//! every formula in this crate.
//!
//! All internal computation is SI; unit conversions (amu, days, nm, Hz)
//! happen only at the configuration/CLI boundary, so formula code never
//! carries conversion factors.

/// Reduced Planck constant ħ, J·s (CODATA, exact since the 2019 SI).
pub const HBAR: f64 = 1.054571817e-34;

/// Newtonian constant of gravitation G, m³·kg⁻¹·s⁻² (CODATA 2018).
pub const G: f64 = 6.67430e-11;

/// Boltzmann constant k_B, J·K⁻¹ (exact since the 2019 SI).
pub const K_B: f64 = 1.380649e-23;

/// Unified atomic mass unit, kg (CODATA 2018).
pub const AMU: f64 = 1.66053906660e-27;

/// Seconds per day, for mission-duration conversions at the config boundary.
pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// The constant set bundled as a value, for reporting and bindings.
///
/// The temperature-rate convention used throughout: a heating rate in K/s is
/// the 1D energy gain rate divided by `k_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Gravitational constant, m³·kg⁻¹·s⁻².
    pub g: f64,
    /// Boltzmann constant, J·K⁻¹.
    pub k_b: f64,
    /// Atomic mass unit, kg.
    pub amu: f64,
}

/// Returns the fixed constant set; identical values on every call.
pub fn constants() -> PhysicalConstants {
    PhysicalConstants {
        hbar: HBAR,
        g: G,
        k_b: K_B,
        amu: AMU,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codata_values() {
        let c = constants();
        assert_eq!(c.hbar, 1.054571817e-34);
        assert_eq!(c.g, 6.67430e-11);
        assert_eq!(c.k_b, 1.380649e-23);
        assert_eq!(c.amu, 1.66053906660e-27);
    }

    #[test]
    fn all_strictly_positive() {
        let c = constants();
        for v in [c.hbar, c.g, c.k_b, c.amu] {
            assert!(v > 0.0 && v.is_finite());
        }
    }

    #[test]
    fn repeated_calls_identical_bit_for_bit() {
        let a = constants();
        let b = constants();
        assert_eq!(a.hbar.to_bits(), b.hbar.to_bits());
        assert_eq!(a.g.to_bits(), b.g.to_bits());
        assert_eq!(a.k_b.to_bits(), b.k_b.to_bits());
        assert_eq!(a.amu.to_bits(), b.amu.to_bits());
    }
}
