//! Case normal modes of the stationary discrete-velocity kinetic equation.
//!
//! For a speed `c` with `v_1 < .. < v_K < c < v_{K+1} < .. < v_N`, bounded
//! solutions on `z < 0` are spanned by `K` modes `exp(lambda z) F(v)` and on
//! `z > 0` by `N - K` modes `exp(-lambda z) F(v)`. The exponents are the
//! positive roots of the dispersion functions
//!
//! ```text
//! Q_left(l)  = sum_i w_i (v_i - c) / (T_-(v_i - c) + l (v_i - c))
//! Q_right(l) = sum_i w_i (v_i - c) / (T_+(v_i - c) - l (v_i - c))
//! ```
//!
//! Each root sits alone between two consecutive poles, so every mode is
//! tied to the velocity whose pole caps its bracket (its *anchor*).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetics::{critical_speeds, run_length, KineticParams, Sign};
use crate::measure::VelocityMeasure;
use crate::roots::{bisect, Tolerance};

/// Relative inset applied to pole endpoints before bisection.
pub const POLE_INSET: f64 = 1e-10;

/// Minimal admissible distance between `c` and any velocity, in units of the speed scale.
pub const COLLISION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Modes living on `z < 0`, growing like `exp(lambda z)`.
    Left,
    /// Modes living on `z > 0`, decaying like `exp(-lambda z)`.
    Right,
}

impl Side {
    pub fn z_sign(self) -> Sign {
        match self {
            Side::Left => Sign::Minus,
            Side::Right => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseMode {
    pub side: Side,
    /// Spatial decay exponent, strictly positive.
    pub lambda: f64,
    /// `F(v_i)` on every velocity of the measure.
    pub profile: Vec<f64>,
    /// Index of the velocity whose pole is the upper end of this root's bracket.
    pub anchor: usize,
    /// `<F> = sum_i w_i F(v_i)`.
    pub mean: f64,
}

impl CaseMode {
    /// `sum_i w_i (v_i - c) F(v_i)`; zero for a genuine mode.
    pub fn flux(&self, measure: &VelocityMeasure, c: f64) -> f64 {
        measure
            .velocities()
            .iter()
            .zip(measure.weights())
            .zip(&self.profile)
            .map(|((v, w), f)| w * (v - c) * f)
            .sum()
    }
}

/// All Case modes at one speed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeBasis {
    pub c: f64,
    /// Number of velocities below `c`.
    pub k: usize,
    /// Anchored at `v_1 .. v_K`; exponents increase with the anchor.
    pub left: Vec<CaseMode>,
    /// Anchored at `v_{K+1} .. v_N`; exponents decrease with the anchor.
    pub right: Vec<CaseMode>,
}

impl ModeBasis {
    pub fn n(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// Slowest-decaying left mode (smallest exponent).
    pub fn principal_left(&self) -> &CaseMode {
        &self.left[0]
    }

    /// Slowest-decaying right mode (smallest exponent).
    pub fn principal_right(&self) -> &CaseMode {
        &self.right[self.right.len() - 1]
    }

    /// Modes in column order of the transfer matrix: left then right, each by anchor.
    pub fn modes(&self) -> impl Iterator<Item = &CaseMode> {
        self.left.iter().chain(self.right.iter())
    }

    /// The right mode anchored at velocity `index`, if `index >= K`.
    pub fn right_anchored(&self, index: usize) -> Option<&CaseMode> {
        index.checked_sub(self.k).and_then(|j| self.right.get(j))
    }

    /// The left mode anchored at velocity `index`, if `index < K`.
    pub fn left_anchored(&self, index: usize) -> Option<&CaseMode> {
        self.left.get(index)
    }
}

fn side_rate(params: &KineticParams, side: Side, d: f64) -> f64 {
    params.rates().at(side.z_sign(), d)
}

/// Denominator `T(v - c) +/- lambda (v - c)` of the mode profile.
fn denominator(params: &KineticParams, side: Side, d: f64, lambda: f64) -> f64 {
    match side {
        Side::Left => side_rate(params, side, d) + lambda * d,
        Side::Right => side_rate(params, side, d) - lambda * d,
    }
}

/// Dispersion function of the given side at exponent `lambda`.
pub fn dispersion_value(
    measure: &VelocityMeasure,
    params: &KineticParams,
    c: f64,
    side: Side,
    lambda: f64,
) -> Result<f64> {
    let mut q = 0.0;
    for (v, w) in measure.velocities().iter().zip(measure.weights()) {
        let d = v - c;
        let den = denominator(params, side, d, lambda);
        if den == 0.0 {
            return Err(Error::Pole(lambda));
        }
        q += w * d / den;
    }
    if q.is_finite() {
        Ok(q)
    } else {
        Err(Error::Pole(lambda))
    }
}

/// Poles of the dispersion function on one side, as `(anchor, pole)` in
/// increasing pole order.
fn poles(measure: &VelocityMeasure, params: &KineticParams, c: f64, side: Side) -> Vec<(usize, f64)> {
    let v = measure.velocities();
    let k = measure.count_below(c);
    let r = params.rates();
    match side {
        Side::Left => (0..k).map(|i| (i, r.t_mm / (c - v[i]))).collect(),
        Side::Right => (k..v.len()).rev().map(|i| (i, r.t_pp / (v[i] - c))).collect(),
    }
}

fn check_speed(measure: &VelocityMeasure, params: &KineticParams, c: f64) -> Result<()> {
    if !c.is_finite() {
        return Err(Error::InvalidInput(format!("speed {c} is not finite")));
    }
    let (index, dist) = measure.nearest(c);
    if dist <= COLLISION_TOL * measure.speed_scale() {
        return Err(Error::Collision { c, index, velocity: measure.velocities()[index] });
    }
    let q_left = run_length(measure, params, Sign::Minus, c);
    let q_right = run_length(measure, params, Sign::Plus, c);
    if !(q_left > 0.0 && q_right < 0.0) {
        let (lo, hi) = critical_speeds(measure, params)
            .map(|w| (w.c_lo, w.c_hi))
            .unwrap_or((f64::NAN, f64::NAN));
        return Err(Error::OutsideWindow { c, lo, hi });
    }
    Ok(())
}

/// Every positive root of both dispersion relations at speed `c`, with
/// their profiles.
pub fn dispersion_roots(measure: &VelocityMeasure, params: &KineticParams, c: f64) -> Result<ModeBasis> {
    check_speed(measure, params, c)?;
    let k = measure.count_below(c);
    let mut left = Vec::with_capacity(k);
    let mut right = Vec::with_capacity(measure.len() - k);
    for side in [Side::Left, Side::Right] {
        let mut lower = 0.0;
        for (anchor, pole) in poles(measure, params, c, side) {
            let lo = lower * (1.0 + POLE_INSET);
            let hi = pole * (1.0 - POLE_INSET);
            let q = |l: f64| dispersion_value(measure, params, c, side, l).unwrap_or(f64::NAN);
            let (q_lo, q_hi) = (q(lo), q(hi));
            // Q_left decreases and Q_right increases between poles.
            let ok = match side {
                Side::Left => q_lo > 0.0 && q_hi < 0.0,
                Side::Right => q_lo < 0.0 && q_hi > 0.0,
            };
            if !ok {
                return Err(Error::NotBracketed(format!(
                    "{side:?} bracket ({lo}, {hi}) at c = {c}: Q = ({q_lo}, {q_hi})"
                )));
            }
            let lambda = bisect(q, lo, hi, Tolerance::machine())?;
            if !(lambda > 0.0) {
                return Err(Error::Numerical(format!("zero exponent returned at c = {c}")));
            }
            let mode = build_mode(measure, params, c, side, lambda, anchor)?;
            match side {
                Side::Left => left.push(mode),
                Side::Right => right.push(mode),
            }
            lower = pole;
        }
    }
    // Right modes were generated from the smallest exponent up; store by anchor.
    right.reverse();
    Ok(ModeBasis { c, k, left, right })
}

fn build_mode(
    measure: &VelocityMeasure,
    params: &KineticParams,
    c: f64,
    side: Side,
    lambda: f64,
    anchor: usize,
) -> Result<CaseMode> {
    let mut profile = Vec::with_capacity(measure.len());
    for v in measure.velocities() {
        let den = denominator(params, side, v - c, lambda);
        let f = 1.0 / den;
        if den == 0.0 || !f.is_finite() {
            return Err(Error::BadProfile(format!("pole at v = {v} for lambda = {lambda}")));
        }
        profile.push(f);
    }
    let mean = measure.average(&profile);
    Ok(CaseMode { side, lambda, profile, anchor, mean })
}

/// Profile of the mode with exponent `lambda` on `side`.
///
/// Only the principal mode of each side is positive everywhere; the mode
/// anchored at the `j`-th pole is negative exactly on the velocities whose
/// poles lie below `lambda`. An exponent past the last pole, or one that
/// does not satisfy the dispersion relation, is rejected.
pub fn mode_profile(
    measure: &VelocityMeasure,
    params: &KineticParams,
    c: f64,
    side: Side,
    lambda: f64,
) -> Result<CaseMode> {
    check_speed(measure, params, c)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::BadProfile(format!("exponent {lambda} must be positive")));
    }
    let poles = poles(measure, params, c, side);
    let below = poles.iter().filter(|(_, p)| *p < lambda).count();
    let Some(&(anchor, _)) = poles.get(below) else {
        return Err(Error::BadProfile(format!(
            "exponent {lambda} lies beyond the last pole on the {side:?} side"
        )));
    };
    let mode = build_mode(measure, params, c, side, lambda, anchor)?;
    let scale: f64 = measure
        .velocities()
        .iter()
        .zip(measure.weights())
        .zip(&mode.profile)
        .map(|((v, w), f)| (w * (v - c) * f).abs())
        .sum();
    if mode.flux(measure, c).abs() > 1e-8 * scale {
        return Err(Error::BadProfile(format!("exponent {lambda} is not a dispersion root")));
    }
    if below == 0 && mode.profile.iter().any(|&f| f <= 0.0) {
        return Err(Error::BadProfile("principal profile is not positive".into()));
    }
    Ok(mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig8() -> (VelocityMeasure, KineticParams) {
        (
            VelocityMeasure::new(&[-1.0, -0.5, 0.5, 1.0], &[1.0; 4]).unwrap(),
            KineticParams::new(0.48, 0.44).unwrap(),
        )
    }

    #[test]
    fn two_velocity_cluster_root() {
        let m = VelocityMeasure::new(&[-1.0, 1.0], &[1.0, 1.0]).unwrap();
        let p = KineticParams::new(0.48, 0.0).unwrap();
        let basis = dispersion_roots(&m, &p, 0.0).unwrap();
        assert_eq!(basis.right.len(), 1);
        assert_eq!(basis.left.len(), 1);
        let mode = basis.principal_right();
        assert!((mode.lambda - 0.48).abs() < 1e-14);
        // Both denominators equal one.
        assert!((mode.profile[0] - 1.0).abs() < 1e-14);
        assert!((mode.profile[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn left_dispersion_positive_at_zero() {
        let (m, p) = fig8();
        assert!(dispersion_value(&m, &p, 0.3, Side::Left, 0.0).unwrap() > 0.0);
        assert!(dispersion_value(&m, &p, 0.3, Side::Right, 0.0).unwrap() < 0.0);
        let far = dispersion_value(&m, &p, 0.3, Side::Left, 1e12).unwrap();
        assert!(far.abs() < 1e-11);
    }

    #[test]
    fn pole_evaluation_is_an_error() {
        let (m, p) = fig8();
        let pole = p.rates().t_pp / (1.0 - 0.25);
        assert_eq!(dispersion_value(&m, &p, 0.25, Side::Right, pole), Err(Error::Pole(pole)));
    }

    #[test]
    fn counts_follow_the_speed() {
        let (m, p) = fig8();
        let basis = dispersion_roots(&m, &p, 0.6).unwrap();
        assert_eq!((basis.left.len(), basis.right.len()), (3, 1));
        let basis = dispersion_roots(&m, &p, 0.2).unwrap();
        assert_eq!((basis.left.len(), basis.right.len()), (2, 2));
        assert!(basis.modes().all(|mode| mode.lambda > 0.0));
    }

    #[test]
    fn collision_and_window_errors() {
        let (m, p) = fig8();
        assert!(matches!(dispersion_roots(&m, &p, 0.5), Err(Error::Collision { index: 2, .. })));
        assert!(matches!(dispersion_roots(&m, &p, 0.95), Err(Error::OutsideWindow { .. })));
        assert!(matches!(dispersion_roots(&m, &p, -0.5 - 1e-12), Err(Error::Collision { .. })));
    }

    #[test]
    fn mode_profile_recovers_roots() {
        let (m, p) = fig8();
        let basis = dispersion_roots(&m, &p, 0.2).unwrap();
        for mode in basis.modes() {
            let again = mode_profile(&m, &p, 0.2, mode.side, mode.lambda).unwrap();
            assert_eq!(again.anchor, mode.anchor);
            assert_eq!(again.profile, mode.profile);
        }
        assert!(mode_profile(&m, &p, 0.2, Side::Left, 0.123).is_err());
        assert!(mode_profile(&m, &p, 0.2, Side::Left, -1.0).is_err());
        assert!(mode_profile(&m, &p, 0.2, Side::Left, 1e6).is_err());
    }

    #[test]
    fn sign_pattern_of_higher_modes() {
        let (m, p) = fig8();
        let basis = dispersion_roots(&m, &p, 0.6).unwrap();
        for (j, mode) in basis.left.iter().enumerate() {
            for (i, f) in mode.profile.iter().enumerate() {
                assert_eq!(*f < 0.0, i < j, "left mode {j}, velocity {i}");
            }
        }
        assert!(basis.principal_right().profile.iter().all(|&f| f > 0.0));
    }
}
