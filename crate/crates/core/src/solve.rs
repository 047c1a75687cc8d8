//! Bracketed bisection for monotone scalar equations.
//!
//! Every root solve in this crate involves a function that is monotone over
//! its bracket (the variance law, the self-energy, and the statistical
//! uncertainty are all monotone in time), so plain bisection is
//! unconditionally robust and needs no derivatives.

use crate::error::{Error, Result};

/// Finds a root of `f` inside `[lo, hi]` by bisection.
///
/// Requires `f(lo)` and `f(hi)` to have opposite signs (or one of them to be
/// exactly zero). Iterates until the bracket width falls below
/// `rel_tol * |midpoint|` or `max_iter` halvings, whichever comes first, and
/// returns the final midpoint.
pub fn bisect(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    max_iter: u32,
) -> Result<f64> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Solver(format!(
            "invalid bracket [{lo}, {hi}]: bounds must be finite with lo < hi"
        )));
    }
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Solver(format!(
            "no sign change over [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * mid.abs() {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
