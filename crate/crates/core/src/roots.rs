//! Bracketing root finder.

use crate::error::{Error, Result};

/// Bisection on [lo, hi] for a continuous `f` with a sign change.
///
/// Stops as soon as |f(x)| ≤ `abs_tol`, when the bracket can no longer be
/// split in floating point, or after `max_iter` halvings; returns the
/// bracket point with the smallest residual.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, abs_tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.abs() <= abs_tol {
        return Ok(lo);
    }
    if f_hi.abs() <= abs_tol {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NotBracketed { lo, hi, f_lo, f_hi });
    }

    let mut best = if f_lo.abs() < f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid.abs() <= abs_tol {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn endpoint_root() {
        assert_eq!(bisect(|x| x - 1.0, 1.0, 3.0, 1e-12, 10).unwrap(), 1.0);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100),
            Err(Error::NotBracketed { .. })
        ));
    }

    #[test]
    fn decreasing_function() {
        let r = bisect(|x: f64| x.cos(), 0.0, 3.0, 1e-14, 200).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }
}
