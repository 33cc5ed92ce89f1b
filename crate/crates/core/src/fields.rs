//! Attractant and nutrient fields generated by a wave profile.
//!
//! The attractant solves `-c S' - D_S S'' + alpha S = rho` and is the
//! convolution of `rho` with the two-sided exponential Green function
//! `s0 exp(-mu_plus z)` (z > 0), `s0 exp(mu_minus z)` (z < 0). Every mode of
//! the density is a one-sided exponential, so `S` is known in closed form.
//!
//! The nutrient satisfies `-c N' - D_N N'' = -gamma rho N`; its log-derivative
//! `u = N'/N` obeys a Riccati equation integrated from the far left.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transfer::WaveProfile;

/// Exponent gap below which the degenerate convolution formula is used.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Default number of nutrient integration steps.
pub const NUTRIENT_STEPS: usize = 4096;

/// Target size of the neglected tail, `exp(-lambda L)`.
pub const TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    pub alpha: f64,
    pub d_s: f64,
    #[serde(default = "one")]
    pub gamma: f64,
    #[serde(default = "one")]
    pub d_n: f64,
    #[serde(default = "one")]
    pub n_plus: f64,
}

fn one() -> f64 {
    1.0
}

impl FieldParams {
    pub fn new(alpha: f64, d_s: f64) -> Result<Self> {
        let p = FieldParams { alpha, d_s, gamma: 1.0, d_n: 1.0, n_plus: 1.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("alpha", self.alpha),
            ("d_s", self.d_s),
            ("gamma", self.gamma),
            ("d_n", self.d_n),
            ("n_plus", self.n_plus),
        ] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} = {x} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenExponents {
    pub mu_minus: f64,
    pub mu_plus: f64,
    pub s0: f64,
    pub alpha: f64,
    pub d_s: f64,
}

pub fn green_exponents(c: f64, alpha: f64, d_s: f64) -> Result<GreenExponents> {
    if !(alpha > 0.0 && d_s > 0.0) || !alpha.is_finite() || !d_s.is_finite() {
        return Err(Error::InvalidParams(format!("alpha = {alpha} and d_s = {d_s} must be positive")));
    }
    if !c.is_finite() {
        return Err(Error::InvalidInput(format!("speed {c} is not finite")));
    }
    let root = (c * c + 4.0 * alpha * d_s).sqrt();
    // mu_minus = (root - c) / 2D, written without cancellation for c > 0.
    let mu_minus = if c > 0.0 { 2.0 * alpha / (root + c) } else { (root - c) / (2.0 * d_s) };
    let mu_plus = if c < 0.0 { 2.0 * alpha / (root - c) } else { (root + c) / (2.0 * d_s) };
    Ok(GreenExponents { mu_minus, mu_plus, s0: 1.0 / root, alpha, d_s })
}

/// `S'(0) / s0` in modal form:
/// `sum a<F> lambda/(lambda + mu_plus) - sum b<F> lambda/(lambda + mu_minus)`.
pub fn upsilon(profile: &WaveProfile, alpha: f64, d_s: f64) -> Result<f64> {
    let g = green_exponents(profile.c(), alpha, d_s)?;
    let basis = profile.basis();
    let left: f64 = basis
        .left
        .iter()
        .zip(profile.left_amplitudes())
        .map(|(m, amp)| amp * m.lambda / (m.lambda + g.mu_plus))
        .sum();
    let right: f64 = basis
        .right
        .iter()
        .zip(profile.right_amplitudes())
        .map(|(m, amp)| amp * m.lambda / (m.lambda + g.mu_minus))
        .sum();
    Ok(left - right)
}

/// `(exp(-p w) - exp(-q w)) / (q - p)` for `w >= 0`, without cancellation.
fn exp_difference(p: f64, q: f64, w: f64) -> f64 {
    let gap = q - p;
    if gap.abs() < RESONANCE_TOL {
        return w * (-0.5 * (p + q) * w).exp();
    }
    let lo = p.min(q);
    (-lo * w).exp() * (-(-gap.abs() * w).exp_m1()) / gap.abs()
}

/// Attractant at `z`, in closed form.
pub fn signal_at(profile: &WaveProfile, g: &GreenExponents, z: f64) -> f64 {
    let basis = profile.basis();
    let (mp, mm) = (g.mu_plus, g.mu_minus);
    let mut s = 0.0;
    if z >= 0.0 {
        for (m, amp) in basis.left.iter().zip(profile.left_amplitudes()) {
            s += amp * (-mp * z).exp() / (mp + m.lambda);
        }
        for (m, amp) in basis.right.iter().zip(profile.right_amplitudes()) {
            let k = m.lambda;
            s += amp * (exp_difference(k, mp, z) + (-k * z).exp() / (mm + k));
        }
    } else {
        let w = -z;
        for (m, amp) in basis.right.iter().zip(profile.right_amplitudes()) {
            s += amp * (-mm * w).exp() / (mm + m.lambda);
        }
        for (m, amp) in basis.left.iter().zip(profile.left_amplitudes()) {
            let l = m.lambda;
            s += amp * (exp_difference(mm, l, w) + (-l * w).exp() / (mp + l));
        }
    }
    g.s0 * s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalTable {
    pub z: Vec<f64>,
    pub s: Vec<f64>,
}

pub fn signal_profile(profile: &WaveProfile, alpha: f64, d_s: f64, grid: &[f64]) -> Result<SignalTable> {
    let g = green_exponents(profile.c(), alpha, d_s)?;
    Ok(SignalTable { z: grid.to_vec(), s: grid.iter().map(|&z| signal_at(profile, &g, z)).collect() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NutrientSolution {
    pub z: Vec<f64>,
    /// `d/dz log N`.
    pub u: Vec<f64>,
    pub n: Vec<f64>,
    pub n_plus: f64,
    pub d_n: f64,
    pub gamma: f64,
}

/// Half-width of the nutrient domain: long enough for every principal mode
/// and for the advective relaxation `exp(-c z / D_N)` to fall below [`TAIL_TOL`].
pub fn nutrient_half_width(profile: &WaveProfile, d_n: f64) -> f64 {
    let (lm, lp) = profile.principal_exponents();
    let rate = lm.min(lp).min(profile.c() / d_n);
    -TAIL_TOL.ln() / rate
}

/// Riccati integration of `u' = -(c/D_N) u - u^2 + (gamma/D_N) rho` from
/// `u(-L) = 0` with fixed-step RK4, together with `(log N)' = u` and
/// `N(L) = N_+`. `half_width` defaults to [`nutrient_half_width`].
pub fn nutrient_profile(
    profile: &WaveProfile,
    gamma: f64,
    d_n: f64,
    n_plus: f64,
    half_width: Option<f64>,
    n_grid: usize,
) -> Result<NutrientSolution> {
    let c = profile.c();
    if !(c > 0.0) {
        return Err(Error::InvalidInput(format!("nutrient profile requires c > 0, got {c}")));
    }
    if !(gamma > 0.0 && d_n > 0.0 && n_plus > 0.0) {
        return Err(Error::InvalidParams("gamma, d_n and n_plus must be positive".into()));
    }
    let l = half_width.unwrap_or_else(|| nutrient_half_width(profile, d_n));
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidInput(format!("nutrient half-width {l} must be positive")));
    }
    let steps = n_grid.max(16);
    let h = 2.0 * l / steps as f64;
    let rhs = |z: f64, u: f64| -(c / d_n) * u - u * u + (gamma / d_n) * profile.eval_rho(z);
    let mut z = Vec::with_capacity(steps + 1);
    let mut u = Vec::with_capacity(steps + 1);
    let mut log_n = Vec::with_capacity(steps + 1);
    let (mut uk, mut lk) = (0.0f64, 0.0f64);
    z.push(-l);
    u.push(uk);
    log_n.push(lk);
    for k in 0..steps {
        let zk = -l + k as f64 * h;
        let k1 = rhs(zk, uk);
        let k2 = rhs(zk + 0.5 * h, uk + 0.5 * h * k1);
        let k3 = rhs(zk + 0.5 * h, uk + 0.5 * h * k2);
        let k4 = rhs(zk + h, uk + h * k3);
        let u_next = uk + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // (log N)' = u, integrated with the RK4 stage values of u.
        let u2 = uk + 0.5 * h * k1;
        let u3 = uk + 0.5 * h * k2;
        let u4 = uk + h * k3;
        lk += h / 6.0 * (uk + 2.0 * u2 + 2.0 * u3 + u4);
        uk = u_next;
        if !uk.is_finite() || uk.abs() > 1e100 {
            return Err(Error::Numerical(format!("nutrient log-derivative blew up near z = {zk}")));
        }
        z.push(if k + 1 == steps { l } else { -l + (k + 1) as f64 * h });
        u.push(uk);
        log_n.push(lk);
    }
    let shift = n_plus.ln() - lk;
    let n = log_n.iter().map(|x| (x + shift).exp()).collect();
    Ok(NutrientSolution { z, u, n, n_plus, d_n, gamma })
}

/// A-posteriori check of the frozen sign pattern of the gradients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnsatzReport {
    pub s_increasing_left: bool,
    pub s_decreasing_right: bool,
    pub argmax_z: f64,
    pub argmax_at_origin: bool,
    /// `None` when the nutrient check does not apply (`c <= 0`).
    pub n_increasing: Option<bool>,
    pub valid: bool,
}

/// Flags on tabulated fields. `S` must rise on `z < 0`, fall on `z > 0`, and
/// peak within one grid cell of the origin; `N`, if given, must increase
/// (`u > 0` past the left end, `N` nondecreasing on the table).
pub fn ansatz_check(signal: &SignalTable, nutrient: Option<&NutrientSolution>) -> AnsatzReport {
    let (z, s) = (&signal.z, &signal.s);
    let top = s.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let slack = 1e-12 * top;
    let mut s_increasing_left = true;
    let mut s_decreasing_right = true;
    for k in 1..z.len() {
        let ds = s[k] - s[k - 1];
        if z[k] <= 0.0 && ds < -slack {
            s_increasing_left = false;
        }
        if z[k - 1] >= 0.0 && ds > slack {
            s_decreasing_right = false;
        }
    }
    let (imax, argmax_z) = s
        .iter()
        .enumerate()
        .fold((0, f64::NAN), |(bi, bz), (i, v)| if bz.is_nan() || *v > s[bi] { (i, z[i]) } else { (bi, bz) });
    let cell = |i: usize| {
        let left = if i > 0 { z[i] - z[i - 1] } else { 0.0 };
        let right = if i + 1 < z.len() { z[i + 1] - z[i] } else { 0.0 };
        left.max(right)
    };
    let argmax_at_origin = !z.is_empty() && argmax_z.abs() <= cell(imax) * (1.0 + 1e-12);
    // N' = u N: positivity of u is strict growth even where N stalls in floating point.
    let n_increasing = nutrient.map(|n| {
        n.u[1..].iter().all(|&u| u > 0.0) && n.n.windows(2).all(|w| w[1] >= w[0]) && n.n[0] < n.n[n.n.len() - 1]
    });
    let valid = s_increasing_left && s_decreasing_right && argmax_at_origin && n_increasing.unwrap_or(true);
    AnsatzReport { s_increasing_left, s_decreasing_right, argmax_z, argmax_at_origin, n_increasing, valid }
}

/// Uniform grid of `2 n + 1` points on `[-left, right]` with `z = 0` at index `n`.
pub fn centered_grid(left: f64, right: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    let mut z: Vec<f64> = (0..n).map(|k| -left * (n - k) as f64 / n as f64).collect();
    z.push(0.0);
    z.extend((1..=n).map(|k| right * k as f64 / n as f64));
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::KineticParams;
    use crate::measure::VelocityMeasure;
    use crate::modes::dispersion_roots;
    use crate::transfer::solve_weights;

    fn profile(chi_s: f64, chi_n: f64, c: f64) -> WaveProfile {
        let m = VelocityMeasure::new(&[-1.0, -0.5, 0.5, 1.0], &[1.0; 4]).unwrap();
        let p = KineticParams::new(chi_s, chi_n).unwrap();
        solve_weights(&m, &p, dispersion_roots(&m, &p, c).unwrap()).unwrap()
    }

    #[test]
    fn exponents() {
        let g = green_exponents(0.0, 50.0, 0.5).unwrap();
        assert!((g.mu_minus - 10.0).abs() < 1e-12 && (g.mu_plus - 10.0).abs() < 1e-12);
        let g = green_exponents(0.3, 50.0, 0.5).unwrap();
        assert!((g.mu_minus * g.mu_plus - 100.0).abs() < 1e-12);
        let h = 1e-6;
        let a = green_exponents(0.3 - h, 50.0, 0.5).unwrap();
        let b = green_exponents(0.3 + h, 50.0, 0.5).unwrap();
        assert!(b.mu_plus > a.mu_plus && b.mu_minus < a.mu_minus);
        assert!(green_exponents(0.1, 0.0, 1.0).is_err());
        assert!(green_exponents(0.1, 1.0, -1.0).is_err());
    }

    #[test]
    fn symmetric_cluster_has_flat_top() {
        let w = profile(0.4, 0.0, 0.0);
        assert!(upsilon(&w, 50.0, 0.5).unwrap().abs() < 1e-10);
    }

    #[test]
    fn elliptic_residual_and_slope() {
        let w = profile(0.48, 0.44, 0.2);
        let (alpha, d_s) = (3.0, 0.5);
        let g = green_exponents(0.2, alpha, d_s).unwrap();
        let h = 1e-3;
        let rho_max = w.eval_rho(0.0);
        for z in [-3.0, -0.7, -0.01, 0.02, 0.5, 4.0] {
            let s = |x: f64| signal_at(&w, &g, x);
            let d1 = (s(z + h) - s(z - h)) / (2.0 * h);
            let d2 = (s(z + h) - 2.0 * s(z) + s(z - h)) / (h * h);
            let r = -0.2 * d1 - d_s * d2 + alpha * s(z) - w.eval_rho(z);
            assert!(r.abs() < 1e-6 * rho_max, "z = {z}: residual {r}");
        }
        let slope = (signal_at(&w, &g, 1e-6) - signal_at(&w, &g, -1e-6)) / 2e-6;
        assert!((slope - g.s0 * upsilon(&w, alpha, d_s).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn resonant_formula_is_continuous() {
        assert!((exp_difference(2.0, 2.0 + 1e-10, 0.7) - 0.7 * (-1.4f64).exp()).abs() < 1e-10);
        let a = exp_difference(2.0, 2.0 + 2e-9, 0.7);
        let b = exp_difference(2.0, 2.0 + 5e-10, 0.7);
        assert!((a - b).abs() < 1e-9);
        assert!((exp_difference(1.0, 3.0, 0.5) - ((-0.5f64).exp() - (-1.5f64).exp()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn nutrient_is_increasing() {
        let w = profile(0.48, 0.44, 0.2);
        let sol = nutrient_profile(&w, 1.0, 1.0, 1.0, None, NUTRIENT_STEPS).unwrap();
        assert!(sol.n.windows(2).all(|p| p[1] >= p[0]));
        assert!(sol.n[0] < *sol.n.last().unwrap());
        assert!((sol.n.last().unwrap() - 1.0).abs() < 1e-15);
        assert!(sol.u[1..].iter().all(|&u| u > 0.0));
        assert!(nutrient_profile(&profile(0.4, 0.0, 0.0), 1.0, 1.0, 1.0, None, 100).is_err());
    }

    #[test]
    fn ansatz_flags() {
        let w = profile(0.48, 0.44, 0.35);
        let table = signal_profile(&w, 50.0, 0.5, &centered_grid(5.0, 5.0, 500)).unwrap();
        let report = ansatz_check(&table, None);
        assert_eq!(report.n_increasing, None);
        // Not a root: the peak is off the origin.
        assert!(upsilon(&w, 50.0, 0.5).unwrap().abs() > 1e-3);
        assert!(!report.argmax_at_origin);
        assert!(!report.valid);
    }
}
