//! Travelling wave of the diffusion-limit (drift-diffusion) model.
//!
//! On each side of the origin the cell density has constant drift, so it is
//! a pure exponential: `exp(lambda_minus z)` for `z < 0`, `exp(-lambda_plus z)`
//! for `z > 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::green_exponents;
use crate::roots::{bisect, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroParams {
    pub chi_s: f64,
    pub chi_n: f64,
    pub alpha: f64,
    pub d_s: f64,
    #[serde(default = "unit")]
    pub d_rho: f64,
}

fn unit() -> f64 {
    1.0
}

impl MacroParams {
    pub fn new(chi_s: f64, chi_n: f64, alpha: f64, d_s: f64, d_rho: f64) -> Result<Self> {
        if !(chi_s > 0.0 && chi_n >= 0.0 && alpha > 0.0 && d_s > 0.0 && d_rho > 0.0) {
            return Err(Error::InvalidParams(format!(
                "macroscopic parameters must be positive: chi_s = {chi_s}, chi_n = {chi_n}, alpha = {alpha}, d_s = {d_s}, d_rho = {d_rho}"
            )));
        }
        Ok(MacroParams { chi_s, chi_n, alpha, d_s, d_rho })
    }

    /// `(lambda_minus, lambda_plus)` at speed `c`.
    pub fn exponents(&self, c: f64) -> (f64, f64) {
        ((-c + self.chi_s + self.chi_n) / self.d_rho, (c + self.chi_s - self.chi_n) / self.d_rho)
    }

    pub fn admissible(&self, c: f64) -> bool {
        let (lm, lp) = self.exponents(c);
        lm > 0.0 && lp > 0.0
    }
}

fn speed_residual(m: &MacroParams, c: f64) -> f64 {
    m.chi_n - c - m.chi_s * c / (c * c + 4.0 * m.alpha * m.d_s).sqrt()
}

/// The unique `c` in `(0, chi_n)` with `chi_n - c = chi_s c / sqrt(c^2 + 4 alpha D_S)`.
pub fn macro_speed(m: &MacroParams) -> Result<f64> {
    if m.chi_n == 0.0 {
        return Ok(0.0);
    }
    bisect(|c| speed_residual(m, c), 0.0, m.chi_n, Tolerance::absolute(1e-15))
}

/// Slope of the attractant at the origin, up to a positive factor:
/// `-mu_plus/(mu_plus + lambda_minus) + mu_minus/(mu_minus + lambda_plus)`.
pub fn macro_upsilon(m: &MacroParams, c: f64) -> Result<f64> {
    if !m.admissible(c) {
        return Err(Error::InvalidInput(format!("speed {c} is not admissible for the macroscopic wave")));
    }
    let g = green_exponents(c, m.alpha, m.d_s)?;
    let (lm, lp) = m.exponents(c);
    Ok(-g.mu_plus / (g.mu_plus + lm) + g.mu_minus / (g.mu_minus + lp))
}

/// Density normalized by `rho(0) = 1`.
pub fn macro_density(m: &MacroParams, c: f64, z: f64) -> Result<f64> {
    if !m.admissible(c) {
        return Err(Error::InvalidInput(format!("speed {c} is not admissible for the macroscopic wave")));
    }
    let (lm, lp) = m.exponents(c);
    Ok(if z < 0.0 { (lm * z).exp() } else { (-lp * z).exp() })
}
