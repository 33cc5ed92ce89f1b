//! Chemotactic biases, the four-quadrant tumbling rate and the admissible
//! speed window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::VelocityMeasure;
use crate::roots::{bisect, Tolerance};

/// A sign, used both for the side of the origin (`z < 0` / `z > 0`) and for
/// the direction of the relative velocity (`v < c` / `v > c`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn of(x: f64) -> Option<Sign> {
        if x > 0.0 {
            Some(Sign::Plus)
        } else if x < 0.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// The four tumbling rates, indexed `[side of z][sign of v - c]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rates {
    /// `z < 0`, `v < c`: `1 + chi_s + chi_n`.
    pub t_mm: f64,
    /// `z < 0`, `v > c`: `1 - chi_s - chi_n`.
    pub t_mp: f64,
    /// `z > 0`, `v < c`: `1 - chi_s + chi_n`.
    pub t_pm: f64,
    /// `z > 0`, `v > c`: `1 + chi_s - chi_n`.
    pub t_pp: f64,
}

impl Rates {
    pub fn get(&self, z: Sign, rel: Sign) -> f64 {
        match (z, rel) {
            (Sign::Minus, Sign::Minus) => self.t_mm,
            (Sign::Minus, Sign::Plus) => self.t_mp,
            (Sign::Plus, Sign::Minus) => self.t_pm,
            (Sign::Plus, Sign::Plus) => self.t_pp,
        }
    }

    /// Rate on side `z` for relative velocity `v - c`. The line `v = c`
    /// carries no flux; it is assigned the `v > c` rate.
    pub fn at(&self, z: Sign, v_minus_c: f64) -> f64 {
        self.get(z, if v_minus_c < 0.0 { Sign::Minus } else { Sign::Plus })
    }

    pub fn min(&self) -> f64 {
        self.t_mm.min(self.t_mp).min(self.t_pm).min(self.t_pp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KineticParams {
    chi_s: f64,
    chi_n: f64,
    rates: Rates,
}

impl KineticParams {
    /// `chi_s` must lie in `(0, 1/2)` and `chi_n` in `[0, 1/2)`.
    pub fn new(chi_s: f64, chi_n: f64) -> Result<Self> {
        if !(chi_s > 0.0 && chi_s < 0.5) {
            return Err(Error::InvalidParams(format!("chi_s = {chi_s} must lie in (0, 1/2)")));
        }
        if !(chi_n >= 0.0 && chi_n < 0.5) {
            return Err(Error::InvalidParams(format!("chi_n = {chi_n} must lie in [0, 1/2)")));
        }
        let rates = Rates {
            t_mm: 1.0 + chi_s + chi_n,
            t_mp: 1.0 - chi_s - chi_n,
            t_pm: 1.0 - chi_s + chi_n,
            t_pp: 1.0 + chi_s - chi_n,
        };
        Ok(KineticParams { chi_s, chi_n, rates })
    }

    pub fn chi_s(&self) -> f64 {
        self.chi_s
    }

    pub fn chi_n(&self) -> f64 {
        self.chi_n
    }

    /// Effective bias for `z > 0`, where the two signals compete.
    pub fn chi_plus(&self) -> f64 {
        self.chi_s - self.chi_n
    }

    /// Effective bias for `z < 0`, where both signals attract.
    pub fn chi_minus(&self) -> f64 {
        self.chi_s + self.chi_n
    }

    pub fn rates(&self) -> &Rates {
        &self.rates
    }
}

/// Tumbling rate selected by the signs of `z` and `v - c`. Zero arguments
/// are rejected: the caller decides which side of the discontinuity it means.
pub fn tumbling_rate(params: &KineticParams, z_sign: f64, v_minus_c_sign: f64) -> Result<f64> {
    let z = Sign::of(z_sign).ok_or_else(|| Error::InvalidInput("sign of z must be nonzero".into()))?;
    let rel = Sign::of(v_minus_c_sign)
        .ok_or_else(|| Error::InvalidInput("sign of v - c must be nonzero".into()))?;
    Ok(params.rates.get(z, rel))
}

/// Mean algebraic run length with the rates of side `z`:
/// `sum_i w_i (v_i - c) / T_z(v_i - c)`.
pub fn run_length(measure: &VelocityMeasure, params: &KineticParams, z: Sign, c: f64) -> f64 {
    let rates = params.rates();
    measure
        .velocities()
        .iter()
        .zip(measure.weights())
        .map(|(v, w)| w * (v - c) / rates.at(z, v - c))
        .sum()
}

/// `R(c)`: mean run length with the `z > 0` rates. Continuous and decreasing.
pub fn mean_run_length(measure: &VelocityMeasure, params: &KineticParams, c: f64) -> f64 {
    run_length(measure, params, Sign::Plus, c)
}

/// Admissible wave speeds: `c_lo < c < c_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedWindow {
    /// Zero of the `z > 0` run length; the right tail stops decaying below it.
    pub c_lo: f64,
    /// Zero of the `z < 0` run length; the left tail stops decaying above it.
    pub c_hi: f64,
}

impl SpeedWindow {
    pub fn contains(&self, c: f64) -> bool {
        self.c_lo < c && c < self.c_hi
    }
}

/// Both critical speeds by bisection on the monotone run-length functions.
pub fn critical_speeds(measure: &VelocityMeasure, params: &KineticParams) -> Result<SpeedWindow> {
    let lo = measure.min_velocity();
    let hi = measure.max_velocity();
    let tol = Tolerance::absolute(1e-14);
    let find = |z: Sign| {
        bisect(|c| run_length(measure, params, z, c), lo, hi, tol).map_err(|e| {
            Error::NotBracketed(format!("critical speed for side {z:?} not bracketed: {e}"))
        })
    };
    let c_lo = find(Sign::Plus)?;
    let c_hi = find(Sign::Minus)?;
    let scale = measure.speed_scale();
    for c in [c_lo, c_hi] {
        if !(c.abs() < scale) {
            return Err(Error::NotBracketed(format!("critical speed {c} outside (-{scale}, {scale})")));
        }
    }
    if !(c_lo < c_hi) {
        return Err(Error::InvalidParams(format!("empty speed window ({c_lo}, {c_hi})")));
    }
    Ok(SpeedWindow { c_lo, c_hi })
}
