//! Matching of the left and right modal expansions at `z = 0`.
//!
//! The wave is
//!
//! ```text
//! f(z, v) = sum_k a_k exp( lambda_k z) F_k(v)    (z < 0, left modes)
//! f(z, v) = sum_k b_k exp(-lambda_k z) F_k(v)    (z > 0, right modes)
//! ```
//!
//! and continuity at the origin is the square system `(-F_left | F_right) (a, b) = 0`,
//! whose left null vector is `w_i (v_i - c)`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinetics::{KineticParams, Sign};
use crate::linalg::{null_vector, NullMethod};
use crate::measure::VelocityMeasure;
use crate::modes::{CaseMode, ModeBasis};

/// Number of decay lengths of the principal mode covered by default grids.
pub const DECAY_LENGTHS: f64 = 25.0;

/// Grid points per side used to verify positivity of a solved wave.
pub const POSITIVITY_SAMPLES: usize = 64;

/// Row-major `N x N` transfer matrix.
pub fn transfer_matrix(basis: &ModeBasis) -> Vec<f64> {
    let n = basis.n();
    let mut m = vec![0.0; n * n];
    for (j, mode) in basis.modes().enumerate() {
        let sign = if j < basis.k { -1.0 } else { 1.0 };
        for (i, f) in mode.profile.iter().enumerate() {
            m[i * n + j] = sign * f;
        }
    }
    m
}

/// A matched and normalized wave at one speed.
#[derive(Debug, Clone, Serialize)]
pub struct WaveProfile {
    #[serde(skip)]
    measure: VelocityMeasure,
    #[serde(skip)]
    params: KineticParams,
    basis: ModeBasis,
    a: Vec<f64>,
    b: Vec<f64>,
    kappa_plus: f64,
    kappa_minus: f64,
    #[serde(skip)]
    svd_fallback: bool,
}

/// Null direction of the transfer matrix, scaled to unit mass with a positive
/// total mass; fails with [`Error::Ansatz`] if `f` is not positive.
pub fn solve_weights(measure: &VelocityMeasure, params: &KineticParams, basis: ModeBasis) -> Result<WaveProfile> {
    let n = basis.n();
    let null = null_vector(&transfer_matrix(&basis), n)?;
    let k = basis.k;
    let mut profile = WaveProfile::from_parts(
        measure.clone(),
        *params,
        basis,
        null.vector[..k].to_vec(),
        null.vector[k..].to_vec(),
    )?;
    profile.svd_fallback = null.method == NullMethod::Svd;
    let mass = profile.mass();
    if !(mass.abs() > 0.0) || !mass.is_finite() {
        return Err(Error::Numerical(format!("total mass {mass} of the matched wave")));
    }
    profile.rescale(1.0 / mass);
    profile.check_positive()?;
    Ok(profile)
}

fn weighted_sum(modes: &[CaseMode], coef: &[f64], i: usize, z_abs: f64, shift: f64) -> f64 {
    modes.iter().zip(coef).map(|(m, c)| c * (-(m.lambda - shift) * z_abs).exp() * m.profile[i]).sum()
}

impl WaveProfile {
    /// Assemble a profile from explicit weights, without normalization or checks.
    pub fn from_parts(
        measure: VelocityMeasure,
        params: KineticParams,
        basis: ModeBasis,
        a: Vec<f64>,
        b: Vec<f64>,
    ) -> Result<Self> {
        if a.len() != basis.left.len() || b.len() != basis.right.len() || basis.n() != measure.len() {
            return Err(Error::InvalidInput("weight counts do not match the mode basis".into()));
        }
        let mut p = WaveProfile {
            measure,
            params,
            basis,
            a,
            b,
            kappa_plus: 0.0,
            kappa_minus: 0.0,
            svd_fallback: false,
        };
        p.update_kappa();
        Ok(p)
    }

    fn rescale(&mut self, s: f64) {
        self.a.iter_mut().chain(self.b.iter_mut()).for_each(|x| *x *= s);
        self.update_kappa();
    }

    fn update_kappa(&mut self) {
        let f0: Vec<f64> = (0..self.measure.len()).map(|i| self.eval_f(0.0, i)).collect();
        self.kappa_plus = self.project(&f0, self.basis.principal_right());
        self.kappa_minus = self.project(&f0, self.basis.principal_left());
    }

    /// `<f (v-c)^2 F> / <(v-c)^2 F^2>`.
    fn project(&self, f: &[f64], mode: &CaseMode) -> f64 {
        let c = self.c();
        let (mut num, mut den) = (0.0, 0.0);
        for (i, (v, w)) in self.measure.velocities().iter().zip(self.measure.weights()).enumerate() {
            let d2 = (v - c) * (v - c);
            num += w * d2 * f[i] * mode.profile[i];
            den += w * d2 * mode.profile[i] * mode.profile[i];
        }
        num / den
    }

    pub fn c(&self) -> f64 {
        self.basis.c
    }

    pub fn measure(&self) -> &VelocityMeasure {
        &self.measure
    }

    pub fn params(&self) -> &KineticParams {
        &self.params
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn kappa_plus(&self) -> f64 {
        self.kappa_plus
    }

    pub fn kappa_minus(&self) -> f64 {
        self.kappa_minus
    }

    /// Whether the null vector came from the singular value fallback.
    pub fn used_svd(&self) -> bool {
        self.svd_fallback
    }

    /// Principal exponents `(lambda_minus, lambda_plus)`.
    pub fn principal_exponents(&self) -> (f64, f64) {
        (self.basis.principal_left().lambda, self.basis.principal_right().lambda)
    }

    /// `int rho dz` from the modal representation.
    pub fn mass(&self) -> f64 {
        let left: f64 = self.basis.left.iter().zip(&self.a).map(|(m, a)| a * m.mean / m.lambda).sum();
        let right: f64 = self.basis.right.iter().zip(&self.b).map(|(m, b)| b * m.mean / m.lambda).sum();
        left + right
    }

    /// Left amplitudes `a_k <F_k>`.
    pub fn left_amplitudes(&self) -> Vec<f64> {
        self.basis.left.iter().zip(&self.a).map(|(m, a)| a * m.mean).collect()
    }

    /// Right amplitudes `b_k <F_k>`.
    pub fn right_amplitudes(&self) -> Vec<f64> {
        self.basis.right.iter().zip(&self.b).map(|(m, b)| b * m.mean).collect()
    }

    /// `f(z, v_i)`; at `z = 0` the right expansion is used.
    pub fn eval_f(&self, z: f64, i: usize) -> f64 {
        if z < 0.0 {
            weighted_sum(&self.basis.left, &self.a, i, -z, 0.0)
        } else {
            weighted_sum(&self.basis.right, &self.b, i, z, 0.0)
        }
    }

    /// `f(z, v_i) exp(lambda |z|)` with `lambda` the principal exponent of
    /// the side of `z`; finite for all `z`.
    pub fn eval_f_scaled(&self, z: f64, i: usize) -> f64 {
        if z < 0.0 {
            weighted_sum(&self.basis.left, &self.a, i, -z, self.basis.principal_left().lambda)
        } else {
            weighted_sum(&self.basis.right, &self.b, i, z, self.basis.principal_right().lambda)
        }
    }

    /// `f(z, .)` on all velocities.
    pub fn eval_f_all(&self, z: f64) -> Vec<f64> {
        (0..self.measure.len()).map(|i| self.eval_f(z, i)).collect()
    }

    pub fn eval_rho(&self, z: f64) -> f64 {
        self.measure.average(&self.eval_f_all(z))
    }

    /// Density restricted to `v < c` (`Sign::Minus`) or `v > c` (`Sign::Plus`).
    pub fn eval_rho_side(&self, z: f64, rel: Sign) -> f64 {
        let c = self.c();
        self.measure
            .velocities()
            .iter()
            .zip(self.measure.weights())
            .enumerate()
            .filter(|(_, (v, _))| Sign::of(*v - c) == Some(rel))
            .map(|(i, (_, w))| w * self.eval_f(z, i))
            .sum()
    }

    /// Tumbling density `I(z) = sum_i w_i T(z, v_i - c) f(z, v_i)`. It jumps at
    /// the origin; `z = 0` takes the `z > 0` rates.
    pub fn eval_i(&self, z: f64) -> f64 {
        let c = self.c();
        let side = if z < 0.0 { Sign::Minus } else { Sign::Plus };
        let rates = self.params.rates();
        self.measure
            .velocities()
            .iter()
            .zip(self.measure.weights())
            .enumerate()
            .map(|(i, (v, w))| w * rates.at(side, v - c) * self.eval_f(z, i))
            .sum()
    }

    /// `sum_i w_i (v_i - c) f(z, v_i)`.
    pub fn eval_flux(&self, z: f64) -> f64 {
        let c = self.c();
        self.measure
            .velocities()
            .iter()
            .zip(self.measure.weights())
            .enumerate()
            .map(|(i, (v, w))| w * (v - c) * self.eval_f(z, i))
            .sum()
    }

    /// `max_i |f(0-, v_i) - f(0+, v_i)|`.
    pub fn continuity_residual(&self) -> f64 {
        (0..self.measure.len())
            .map(|i| {
                let l: f64 = self.basis.left.iter().zip(&self.a).map(|(m, a)| a * m.profile[i]).sum();
                let r: f64 = self.basis.right.iter().zip(&self.b).map(|(m, b)| b * m.profile[i]).sum();
                (l - r).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Extents `(left, right)` covering [`DECAY_LENGTHS`] principal decay lengths.
    pub fn extent(&self) -> (f64, f64) {
        let (lm, lp) = self.principal_exponents();
        (DECAY_LENGTHS / lm, DECAY_LENGTHS / lp)
    }

    /// `n` points per side, uniformly spaced, excluding `z = 0`.
    pub fn sample_grid(&self, n: usize) -> Vec<f64> {
        let (l, r) = self.extent();
        let mut z: Vec<f64> = (1..=n).rev().map(|k| -l * k as f64 / n as f64).collect();
        z.extend((1..=n).map(|k| r * k as f64 / n as f64));
        z
    }

    fn check_positive(&self) -> Result<()> {
        if !(self.kappa_plus > 0.0 && self.kappa_minus > 0.0) {
            return Err(Error::Ansatz(format!(
                "non-positive asymptotic amplitudes ({}, {}) at c = {}",
                self.kappa_minus,
                self.kappa_plus,
                self.c()
            )));
        }
        let mut grid = self.sample_grid(POSITIVITY_SAMPLES);
        grid.push(0.0);
        let n = self.measure.len();
        let mut f = vec![0.0; n];
        for z in grid {
            let (modes, coef, shift) = if z < 0.0 {
                (&self.basis.left, &self.a, self.basis.principal_left().lambda)
            } else {
                (&self.basis.right, &self.b, self.basis.principal_right().lambda)
            };
            f.iter_mut().for_each(|x| *x = 0.0);
            for (m, c) in modes.iter().zip(coef) {
                let e = c * (-(m.lambda - shift) * z.abs()).exp();
                for (fi, p) in f.iter_mut().zip(&m.profile) {
                    *fi += e * p;
                }
            }
            if let Some(i) = f.iter().position(|x| !(*x > 0.0)) {
                return Err(Error::Ansatz(format!(
                    "f(z = {z}, v = {}) = {} is not positive at c = {}",
                    self.measure.velocities()[i],
                    f[i],
                    self.c()
                )));
            }
        }
        Ok(())
    }
}

/// Monotonicity of the four partial densities on each side of the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    /// `v > c` density decreasing on `z > 0`.
    pub plus_fast_decreasing: bool,
    /// `v < c` density decreasing on `z > 0`.
    pub plus_slow_decreasing: bool,
    /// `v > c` density increasing on `z < 0`.
    pub minus_fast_increasing: bool,
    /// `v < c` density increasing on `z < 0`.
    pub minus_slow_increasing: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub quantity: &'static str,
    pub z: f64,
    pub previous: f64,
    pub value: f64,
}

impl MonotonicityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check strict monotonicity of the partial densities on a grid (zero is ignored).
pub fn monotonicity_report(profile: &WaveProfile, grid: &[f64]) -> MonotonicityReport {
    let mut z: Vec<f64> = grid.iter().copied().filter(|z| *z != 0.0 && z.is_finite()).collect();
    z.sort_by(f64::total_cmp);
    let left: Vec<f64> = z.iter().copied().filter(|z| *z < 0.0).collect();
    let right: Vec<f64> = z.iter().copied().filter(|z| *z > 0.0).collect();
    let mut violations = Vec::new();
    let mut check = |name: &'static str, zs: &[f64], rel: Sign, increasing: bool| {
        let before = violations.len();
        let values: Vec<f64> = zs.iter().map(|&z| profile.eval_rho_side(z, rel)).collect();
        for k in 1..values.len() {
            let (p, q) = (values[k - 1], values[k]);
            let ok = if increasing { q > p || (p == 0.0 && q == 0.0) } else { q < p || (p == 0.0 && q == 0.0) };
            if !ok {
                violations.push(Violation { quantity: name, z: zs[k], previous: p, value: q });
            }
        }
        violations.len() == before
    };
    let plus_fast_decreasing = check("rho_plus_fast", &right, Sign::Plus, false);
    let plus_slow_decreasing = check("rho_plus_slow", &right, Sign::Minus, false);
    let minus_fast_increasing = check("rho_minus_fast", &left, Sign::Plus, true);
    let minus_slow_increasing = check("rho_minus_slow", &left, Sign::Minus, true);
    MonotonicityReport {
        plus_fast_decreasing,
        plus_slow_decreasing,
        minus_fast_increasing,
        minus_slow_increasing,
        violations,
    }
}

/// Profile table: `z, rho, rho_minus, rho_plus, I, f_v1 .. f_vN`, where
/// `rho_minus` and `rho_plus` are the densities over `v < c` and `v > c`.
pub fn write_profile_csv<W: Write>(profile: &WaveProfile, grid: &[f64], mut out: W) -> Result<()> {
    let n = profile.measure().len();
    let mut header = String::from("z,rho,rho_minus,rho_plus,I");
    for i in 1..=n {
        header.push_str(&format!(",f_v{i}"));
    }
    writeln!(out, "{header}")?;
    for &z in grid {
        let mut line = format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            z,
            profile.eval_rho(z),
            profile.eval_rho_side(z, Sign::Minus),
            profile.eval_rho_side(z, Sign::Plus),
            profile.eval_i(z)
        );
        for i in 0..n {
            line.push_str(&format!(",{:.16e}", profile.eval_f(z, i)));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::dispersion_roots;

    fn fig8_profile(c: f64) -> WaveProfile {
        let m = VelocityMeasure::new(&[-1.0, -0.5, 0.5, 1.0], &[1.0; 4]).unwrap();
        let p = KineticParams::new(0.48, 0.44).unwrap();
        let basis = dispersion_roots(&m, &p, c).unwrap();
        solve_weights(&m, &p, basis).unwrap()
    }

    #[test]
    fn left_null_vector_annihilates() {
        let m = VelocityMeasure::new(&[-1.0, -0.5, 0.5, 1.0], &[1.0; 4]).unwrap();
        let p = KineticParams::new(0.48, 0.44).unwrap();
        let basis = dispersion_roots(&m, &p, 0.2).unwrap();
        let t = transfer_matrix(&basis);
        for j in 0..4 {
            let s: f64 = (0..4).map(|i| m.weights()[i] * (m.velocities()[i] - 0.2) * t[i * 4 + j]).sum();
            assert!(s.abs() < 1e-11);
        }
    }

    #[test]
    fn two_velocity_ratio() {
        let m = VelocityMeasure::new(&[-1.0, 1.0], &[1.0, 1.0]).unwrap();
        let p = KineticParams::new(0.3, 0.1).unwrap();
        let basis = dispersion_roots(&m, &p, 0.1).unwrap();
        let fl = basis.left[0].profile.clone();
        let fr = basis.right[0].profile.clone();
        let w = solve_weights(&m, &p, basis).unwrap();
        let ratio = w.b()[0] / w.a()[0];
        assert!((ratio - fl[0] / fr[0]).abs() < 1e-12);
        assert!((ratio - fl[1] / fr[1]).abs() < 1e-12);
    }

    #[test]
    fn structural_invariants() {
        let w = fig8_profile(0.2);
        assert!(w.continuity_residual() < 1e-9);
        assert!((w.mass() - 1.0).abs() < 1e-10);
        for z in [-5.0, -1.0, -0.1, 0.1, 1.0, 5.0] {
            assert!(w.eval_flux(z).abs() < 1e-10);
        }
        assert!((w.eval_rho(-1e-14) - w.eval_rho(0.0)).abs() < 1e-9);
    }

    #[test]
    fn kappa_is_principal_weight() {
        let w = fig8_profile(0.2);
        let b_principal = *w.b().last().unwrap();
        assert!((w.kappa_plus() - b_principal).abs() < 1e-10 * b_principal.abs());
        assert!((w.kappa_minus() - w.a()[0]).abs() < 1e-10 * w.a()[0].abs());
    }

    #[test]
    fn monotone_partial_densities() {
        let w = fig8_profile(0.2);
        let report = monotonicity_report(&w, &w.sample_grid(100));
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn flipped_weight_is_detected() {
        let w = fig8_profile(0.2);
        let mut b = w.b().to_vec();
        b[0] = -5.0 * b[0];
        let bad = WaveProfile::from_parts(w.measure().clone(), *w.params(), w.basis().clone(), w.a().to_vec(), b)
            .unwrap();
        let report = monotonicity_report(&bad, &bad.sample_grid(100));
        assert!(!report.is_clean());
    }

    #[test]
    fn tumbling_density_identity() {
        let w = fig8_profile(0.2);
        let r = w.params().rates();
        for z in [0.3, 2.0] {
            let i = r.t_pp * w.eval_rho_side(z, Sign::Plus) + r.t_pm * w.eval_rho_side(z, Sign::Minus);
            assert!((w.eval_i(z) - i).abs() < 1e-14);
        }
    }

    #[test]
    fn csv_layout() {
        let w = fig8_profile(0.2);
        let mut buf = Vec::new();
        write_profile_csv(&w, &[-1.0, 0.0, 1.0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "z,rho,rho_minus,rho_plus,I,f_v1,f_v2,f_v3,f_v4");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1].split(',').count(), 9);
    }
}
