//! Bracketed scalar root finding.
//!
//! Every root in this crate is found by plain bisection on a verified sign
//! change. The functions involved are monotone between known poles or
//! kinks, so bisection converges unconditionally.

use crate::error::{Error, Result};

/// Stopping rule for [`bisect`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Stop once the bracket is narrower than `abs + rel * |x|`.
    pub abs: f64,
    pub rel: f64,
    /// Stop once `|f(mid)| <= residual`.
    pub residual: f64,
    pub max_iter: usize,
}

impl Tolerance {
    /// Bisect until the bracket cannot be split any further in floating point.
    pub const fn machine() -> Self {
        Tolerance { abs: 0.0, rel: 0.0, residual: 0.0, max_iter: 2200 }
    }

    pub const fn absolute(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0, residual: 0.0, max_iter: 2200 }
    }

    pub const fn with_residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self
    }
}

/// Bisection on `[lo, hi]`. Requires `f(lo)` and `f(hi)` to have opposite
/// signs (a zero at either end is returned immediately).
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::NotBracketed(format!("empty interval [{lo}, {hi}]")));
    }
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !f_lo.is_finite() || !f_hi.is_finite() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NotBracketed(format!(
            "f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    for _ in 0..tol.max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if !f_mid.is_finite() {
            return Err(Error::Numerical(format!("non-finite value f({mid}) during bisection")));
        }
        if f_mid == 0.0 || f_mid.abs() <= tol.residual {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol.abs + tol.rel * mid.abs() {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, Tolerance::machine()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, Tolerance::machine()),
            Err(Error::NotBracketed(_))
        ));
    }

    #[test]
    fn endpoint_zero_is_returned() {
        assert_eq!(bisect(|x| x, 0.0, 1.0, Tolerance::machine()).unwrap(), 0.0);
    }

    #[test]
    fn residual_stop() {
        let tol = Tolerance::absolute(0.0).with_residual(1e-3);
        let r = bisect(|x| x - 0.3, 0.0, 1.0, tol).unwrap();
        assert!((r - 0.3).abs() <= 1e-3);
    }
}
