//! Scanning the matching function over the speed window and assembling waves.
//!
//! `Upsilon(c)` is continuous between consecutive discrete velocities and
//! jumps across each of them, where one Case mode changes side. Roots are only
//! sought inside continuity intervals.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{
    ansatz_check, centered_grid, green_exponents, nutrient_profile, signal_profile, upsilon, AnsatzReport,
    FieldParams, NutrientSolution, SignalTable, NUTRIENT_STEPS,
};
use crate::kinetics::{critical_speeds, KineticParams, Sign};
use crate::measure::VelocityMeasure;
use crate::modes::{dispersion_roots, COLLISION_TOL};
use crate::roots::{bisect, Tolerance};
use crate::transfer::{monotonicity_report, solve_weights, MonotonicityReport, WaveProfile};

/// Accepted residual of the matching function at a refined root.
pub const ROOT_TOL: f64 = 1e-10;

/// Offset (in units of the speed scale) used to move scan points off a velocity.
pub const DISPLACEMENT: f64 = 1e-6;

/// One-sided offsets (in units of the speed scale) used for jump limits.
pub const JUMP_OFFSETS: [f64; 3] = [1e-4, 1e-5, 1e-6];

/// Relative agreement required between the two extrapolated one-sided limits.
pub const JUMP_AGREEMENT: f64 = 0.05;

/// Points per side of the attractant table attached to a wave.
pub const SIGNAL_POINTS: usize = 2000;

/// Matched wave at speed `c`.
pub fn wave_profile_at(measure: &VelocityMeasure, params: &KineticParams, c: f64) -> Result<WaveProfile> {
    solve_weights(measure, params, dispersion_roots(measure, params, c)?)
}

/// `Upsilon(c)`; see [`upsilon`].
pub fn upsilon_at(measure: &VelocityMeasure, params: &KineticParams, alpha: f64, d_s: f64, c: f64) -> Result<f64> {
    upsilon(&wave_profile_at(measure, params, c)?, alpha, d_s)
}

/// Default scan step: smallest gap between velocities over 30, at least `1e-4`.
pub fn default_dc(measure: &VelocityMeasure) -> f64 {
    let gap = measure.velocities().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    (gap / 30.0).max(1e-4)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpRecord {
    pub index: usize,
    pub velocity: f64,
    /// `Upsilon(v-)` and `Upsilon(v+)`, extrapolated.
    pub below: f64,
    pub above: f64,
    pub jump: f64,
    /// `b <F>` of the right mode anchored at `v`, as `c -> v-`.
    pub transferred_below: f64,
    /// `a <F>` of the left mode anchored at `v`, as `c -> v+`.
    pub transferred_above: f64,
    /// Lower bound `w_i 4 chi_S rho_slow(0) / (T_pp T_mp)` on `transferred_below`.
    pub transfer_bound: f64,
    /// Exponent of the mode anchored at `v` at `c = v - eps` for each offset.
    pub exploding_lambda: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpsilonScan {
    pub window: (f64, f64),
    pub c_values: Vec<f64>,
    /// `NaN` where the evaluation failed; see `failures`.
    pub upsilon_values: Vec<f64>,
    /// Number of velocities below each `c`.
    pub interval_ids: Vec<usize>,
    /// Velocities strictly inside the scanned window.
    pub boundaries: Vec<f64>,
    pub jumps: Vec<JumpRecord>,
    pub failures: Vec<(f64, String)>,
}

/// Grid `lo + j dc` over `(max(0, c_lo), c_hi)`, moved off colliding velocities.
pub fn scan_grid(measure: &VelocityMeasure, params: &KineticParams, dc: f64) -> Result<((f64, f64), Vec<f64>)> {
    if !(dc > 0.0 && dc.is_finite()) {
        return Err(Error::InvalidInput(format!("scan step {dc} must be positive")));
    }
    let window = critical_speeds(measure, params)?;
    let lo = window.c_lo.max(0.0);
    let hi = window.c_hi;
    if !(lo < hi) {
        return Err(Error::InvalidParams(format!("empty scan window ({lo}, {hi})")));
    }
    let scale = measure.speed_scale();
    let mut grid = Vec::new();
    let mut j = if lo > window.c_lo { 0 } else { 1 };
    loop {
        let mut c = lo + j as f64 * dc;
        if c >= hi {
            break;
        }
        let (i, dist) = measure.nearest(c);
        if dist <= COLLISION_TOL * scale {
            let v = measure.velocities()[i];
            c = if c >= v { v + DISPLACEMENT * scale } else { v - DISPLACEMENT * scale };
        }
        if window.contains(c) {
            grid.push(c);
        }
        j += 1;
    }
    Ok(((lo, hi), grid))
}

pub fn upsilon_scan(
    measure: &VelocityMeasure,
    params: &KineticParams,
    alpha: f64,
    d_s: f64,
    dc: f64,
) -> Result<UpsilonScan> {
    green_exponents(0.0, alpha, d_s)?;
    let ((lo, hi), c_values) = scan_grid(measure, params, dc)?;
    let results: Vec<Result<f64>> =
        c_values.par_iter().map(|&c| upsilon_at(measure, params, alpha, d_s, c)).collect();
    let mut upsilon_values = Vec::with_capacity(c_values.len());
    let mut failures = Vec::new();
    for (c, r) in c_values.iter().zip(results) {
        match r {
            Ok(u) => upsilon_values.push(u),
            Err(e) => {
                upsilon_values.push(f64::NAN);
                failures.push((*c, e.to_string()));
            }
        }
    }
    let interval_ids = c_values.iter().map(|&c| measure.count_below(c)).collect();
    let interior: Vec<usize> =
        (0..measure.len()).filter(|&i| lo < measure.velocities()[i] && measure.velocities()[i] < hi).collect();
    let boundaries = interior.iter().map(|&i| measure.velocities()[i]).collect();
    let jumps = interior
        .par_iter()
        .filter_map(|&i| jump_at(measure, params, i, alpha, d_s).ok())
        .collect();
    Ok(UpsilonScan { window: (lo, hi), c_values, upsilon_values, interval_ids, boundaries, jumps, failures })
}

/// Limit of `g(eps)` as `eps -> 0`, from values at the three [`JUMP_OFFSETS`].
/// Two linear extrapolations (ratio 10) must agree to [`JUMP_AGREEMENT`].
fn one_sided_limit(values: [f64; 3]) -> Result<f64> {
    let l1 = (10.0 * values[1] - values[0]) / 9.0;
    let l2 = (10.0 * values[2] - values[1]) / 9.0;
    let scale = l1.abs().max(l2.abs());
    if !(l1 - l2).abs().le(&(JUMP_AGREEMENT * scale + 1e-12)) {
        return Err(Error::Numerical(format!("one-sided limit not stabilizing: {values:?}")));
    }
    Ok(l2)
}

/// One-sided limits of the matching function and of the transferred
/// amplitude at the velocity `v_index`.
pub fn jump_at(
    measure: &VelocityMeasure,
    params: &KineticParams,
    v_index: usize,
    alpha: f64,
    d_s: f64,
) -> Result<JumpRecord> {
    let v = *measure
        .velocities()
        .get(v_index)
        .ok_or_else(|| Error::InvalidInput(format!("velocity index {v_index} out of range")))?;
    let window = critical_speeds(measure, params)?;
    let scale = measure.speed_scale();
    let (e_max, e_min) = (JUMP_OFFSETS[0] * scale, JUMP_OFFSETS[2] * scale);
    if !(window.contains(v - e_max) && window.contains(v + e_max)) {
        return Err(Error::InvalidInput(format!("velocity {v} is not interior to the speed window")));
    }
    let gap = measure.velocities().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if e_max >= 0.5 * gap || e_min <= COLLISION_TOL * scale {
        return Err(Error::InvalidInput("jump offsets incompatible with velocity spacing".into()));
    }
    let mut below = [0.0; 3];
    let mut above = [0.0; 3];
    let mut tb = [0.0; 3];
    let mut ta = [0.0; 3];
    let mut rho_slow = [0.0; 3];
    let mut exploding_lambda = Vec::with_capacity(3);
    for (k, eps) in JUMP_OFFSETS.iter().map(|e| e * scale).enumerate() {
        let wl = wave_profile_at(measure, params, v - eps)?;
        below[k] = upsilon(&wl, alpha, d_s)?;
        let j = v_index - wl.basis().k;
        tb[k] = wl.right_amplitudes()[j];
        rho_slow[k] = wl.eval_rho_side(0.0, Sign::Minus);
        exploding_lambda.push((eps, wl.basis().right[j].lambda));
        let wr = wave_profile_at(measure, params, v + eps)?;
        above[k] = upsilon(&wr, alpha, d_s)?;
        ta[k] = wr.left_amplitudes()[v_index];
    }
    let below = one_sided_limit(below)?;
    let above = one_sided_limit(above)?;
    let transferred_below = one_sided_limit(tb)?;
    let transferred_above = one_sided_limit(ta)?;
    let rates = params.rates();
    let transfer_bound =
        measure.weights()[v_index] * 4.0 * params.chi_s() * one_sided_limit(rho_slow)? / (rates.t_pp * rates.t_mp);
    Ok(JumpRecord {
        index: v_index,
        velocity: v,
        below,
        above,
        jump: above - below,
        transferred_below,
        transferred_above,
        transfer_bound,
        exploding_lambda,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    StationaryCluster,
    Travelling,
}

#[derive(Debug, Clone, Serialize)]
pub struct TravellingWave {
    pub c: f64,
    pub kind: WaveKind,
    pub upsilon: f64,
    pub profile: WaveProfile,
    pub signal: SignalTable,
    pub nutrient: Option<NutrientSolution>,
    pub ansatz: AnsatzReport,
    pub monotonicity: MonotonicityReport,
    pub ansatz_valid: bool,
}

/// Compact JSON record of a wave.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveSummary {
    pub c: f64,
    pub lambda_minus: Vec<f64>,
    pub lambda_plus: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub ansatz_valid: bool,
}

impl TravellingWave {
    pub fn summary(&self) -> WaveSummary {
        let basis = self.profile.basis();
        WaveSummary {
            c: self.c,
            lambda_minus: basis.left.iter().map(|m| m.lambda).collect(),
            lambda_plus: basis.right.iter().map(|m| m.lambda).collect(),
            a: self.profile.a().to_vec(),
            b: self.profile.b().to_vec(),
            ansatz_valid: self.ansatz_valid,
        }
    }
}

/// Attractant grid: `SIGNAL_POINTS` per side over 25 decay lengths of the
/// slower of the density and Green exponents on each side.
pub fn signal_grid(profile: &WaveProfile, alpha: f64, d_s: f64) -> Result<Vec<f64>> {
    let g = green_exponents(profile.c(), alpha, d_s)?;
    let (lm, lp) = profile.principal_exponents();
    Ok(centered_grid(25.0 / lm.min(g.mu_minus), 25.0 / lp.min(g.mu_plus), SIGNAL_POINTS))
}

/// Attach fields and checks to a matched profile.
pub fn assemble_wave(profile: WaveProfile, fields: &FieldParams, kind: WaveKind) -> Result<TravellingWave> {
    let c = profile.c();
    let up = upsilon(&profile, fields.alpha, fields.d_s)?;
    let grid = signal_grid(&profile, fields.alpha, fields.d_s)?;
    let signal = signal_profile(&profile, fields.alpha, fields.d_s, &grid)?;
    let nutrient = if c > 0.0 {
        Some(nutrient_profile(&profile, fields.gamma, fields.d_n, fields.n_plus, None, NUTRIENT_STEPS)?)
    } else {
        None
    };
    let ansatz = ansatz_check(&signal, nutrient.as_ref());
    let monotonicity = monotonicity_report(&profile, &profile.sample_grid(200));
    // The nutrient gradient is only controlled for c > 0.
    let ansatz_valid = ansatz.valid && !(c <= 0.0 && profile.params().chi_n() > 0.0);
    Ok(TravellingWave { c, kind, upsilon: up, profile, signal, nutrient, ansatz, monotonicity, ansatz_valid })
}

/// A sign change of the matching function across a velocity with no root on
/// either adjacent interval: no wave, only a jump.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpCrossing {
    pub velocity: f64,
    pub below: f64,
    pub above: f64,
}

/// Scan samples grouped by continuity interval, skipping failed evaluations.
fn intervals(scan: &UpsilonScan) -> Vec<Vec<(f64, f64)>> {
    let mut out: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut last_id = None;
    for ((&c, &u), &id) in scan.c_values.iter().zip(&scan.upsilon_values).zip(&scan.interval_ids) {
        if last_id != Some(id) {
            out.push(Vec::new());
            last_id = Some(id);
        }
        if u.is_finite() {
            out.last_mut().unwrap().push((c, u));
        }
    }
    out
}

fn has_sign_change(points: &[(f64, f64)]) -> bool {
    points.windows(2).any(|w| w[0].1 == 0.0 || w[0].1.signum() != w[1].1.signum())
        || points.last().is_some_and(|p| p.1 == 0.0)
}

pub fn jump_crossings(scan: &UpsilonScan) -> Vec<JumpCrossing> {
    let groups = intervals(scan);
    let mut out = Vec::new();
    for pair in groups.windows(2) {
        let (left, right) = (&pair[0], &pair[1]);
        let (Some(&(cl, ul)), Some(&(cr, ur))) = (left.last(), right.first()) else {
            continue;
        };
        if ul.signum() != ur.signum() && !has_sign_change(left) && !has_sign_change(right) {
            let velocity = scan.boundaries.iter().copied().find(|v| cl < *v && *v < cr).unwrap_or(0.5 * (cl + cr));
            out.push(JumpCrossing { velocity, below: ul, above: ur });
        }
    }
    out
}

/// Refine every sign change inside a continuity interval and assemble the waves.
pub fn find_waves(
    scan: &UpsilonScan,
    measure: &VelocityMeasure,
    params: &KineticParams,
    fields: &FieldParams,
) -> Result<Vec<TravellingWave>> {
    fields.validate()?;
    let mut brackets = Vec::new();
    for group in intervals(scan) {
        for w in group.windows(2) {
            let ((c0, u0), (c1, u1)) = (w[0], w[1]);
            if u0 == 0.0 {
                brackets.push((c0, c0));
            } else if u0.signum() != u1.signum() && u1 != 0.0 {
                brackets.push((c0, c1));
            }
        }
        if let Some(&(c, u)) = group.last() {
            if u == 0.0 {
                brackets.push((c, c));
            }
        }
    }
    let tol = Tolerance::machine().with_residual(ROOT_TOL);
    brackets
        .par_iter()
        .map(|&(lo, hi)| {
            let c = if lo == hi {
                lo
            } else {
                bisect(|c| upsilon_at(measure, params, fields.alpha, fields.d_s, c).unwrap_or(f64::NAN), lo, hi, tol)?
            };
            let kind = if c == 0.0 { WaveKind::StationaryCluster } else { WaveKind::Travelling };
            assemble_wave(wave_profile_at(measure, params, c)?, fields, kind)
        })
        .collect()
}

/// The symmetric wave at `c = 0` without nutrient bias.
pub fn stationary_cluster(
    measure: &VelocityMeasure,
    params: &KineticParams,
    fields: &FieldParams,
) -> Result<TravellingWave> {
    if params.chi_n() != 0.0 {
        return Err(Error::InvalidParams(format!("stationary cluster requires chi_n = 0, got {}", params.chi_n())));
    }
    if !measure.is_symmetric() {
        return Err(Error::InvalidMeasure("stationary cluster requires a symmetric measure".into()));
    }
    assemble_wave(wave_profile_at(measure, params, 0.0)?, fields, WaveKind::StationaryCluster)
}

/// `max |f(z, v_i) - f(-z, v_mirror(i))| / max f(0, .)` over `grid`.
pub fn symmetry_residual(profile: &WaveProfile, grid: &[f64]) -> f64 {
    let m = profile.measure();
    let top = profile.eval_f_all(0.0).into_iter().fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for &z in grid {
        for i in 0..m.len() {
            let d = (profile.eval_f(z, i) - profile.eval_f(-z, m.mirror_index(i))).abs();
            worst = worst.max(d);
        }
    }
    worst / top
}

/// Scan table: `c, upsilon, interval_id`.
pub fn write_scan_csv<W: Write>(scan: &UpsilonScan, mut out: W) -> Result<()> {
    writeln!(out, "c,upsilon,interval_id")?;
    for ((c, u), id) in scan.c_values.iter().zip(&scan.upsilon_values).zip(&scan.interval_ids) {
        writeln!(out, "{c:.16e},{u:.16e},{id}")?;
    }
    Ok(())
}

pub fn waves_json(waves: &[TravellingWave]) -> Result<String> {
    let summaries: Vec<WaveSummary> = waves.iter().map(TravellingWave::summary).collect();
    serde_json::to_string_pretty(&summaries).map_err(|e| Error::Io(e.to_string()))
}
