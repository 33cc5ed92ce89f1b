//! Time marching of the frozen-rate kinetic equation
//! `f_t + (v - c) f_z = I - T f` on `[-L, L]` to its steady state.
//!
//! Second-order upwind differences in space, Heun steps in time, zero inflow
//! at both ends, and the total mass reset to one after every step.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinetics::{KineticParams, Sign};
use crate::measure::VelocityMeasure;
use crate::modes::COLLISION_TOL;
use crate::transfer::WaveProfile;

/// Largest Courant number accepted.
pub const STABLE_COURANT: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelaxOptions {
    pub half_width: f64,
    pub nz: usize,
    /// Time step; `None` picks `courant * dz / max|v - c|`.
    pub dt: Option<f64>,
    pub courant: f64,
    pub t_end: f64,
    /// Stop once the relative residual drops below this.
    pub tol: f64,
    /// Steps between residual samples.
    pub sample_every: usize,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        RelaxOptions { half_width: 30.0, nz: 3000, dt: None, courant: 0.3, t_end: 4000.0, tol: 1e-10, sample_every: 200 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelaxResult {
    pub c: f64,
    /// Cell centres.
    pub z: Vec<f64>,
    pub dz: f64,
    /// `f[i][j] = f(z_j, v_i)`.
    pub f: Vec<Vec<f64>>,
    /// `(t, max |f_t - sigma f| / max f)` samples, `sigma` the mass loss rate.
    pub residual_history: Vec<(f64, f64)>,
    pub t_final: f64,
    pub converged: bool,
}

impl RelaxResult {
    pub fn rho(&self, measure: &VelocityMeasure) -> Vec<f64> {
        (0..self.z.len()).map(|j| self.f.iter().zip(measure.weights()).map(|(row, w)| w * row[j]).sum()).collect()
    }

    /// `sum_i w_i (v_i - c) f(z_j, v_i)` at every cell.
    pub fn flux(&self, measure: &VelocityMeasure) -> Vec<f64> {
        (0..self.z.len())
            .map(|j| {
                self.f
                    .iter()
                    .zip(measure.velocities().iter().zip(measure.weights()))
                    .map(|(row, (v, w))| w * (v - self.c) * row[j])
                    .sum()
            })
            .collect()
    }

    /// Numerical flux through each interior cell face, from the upwind
    /// face values of the scheme. Unlike the cell-centred flux this is
    /// exactly conserved by the discrete steady state up to the leak at the ends.
    pub fn face_flux(&self, measure: &VelocityMeasure) -> Vec<f64> {
        let nz = self.z.len();
        (1..nz - 1)
            .map(|j| {
                measure
                    .velocities()
                    .iter()
                    .zip(measure.weights())
                    .zip(&self.f)
                    .map(|((v, w), row)| {
                        let a = v - self.c;
                        // Face between cells j and j + 1.
                        let face = if a > 0.0 {
                            0.5 * (3.0 * row[j] - row[j - 1])
                        } else {
                            0.5 * (3.0 * row[j + 1] - row.get(j + 2).copied().unwrap_or(0.0))
                        };
                        w * a * face
                    })
                    .sum()
            })
            .collect()
    }

    /// `sum_i w_i int |f - f_ref| dz` against a modal profile.
    pub fn l1_distance(&self, measure: &VelocityMeasure, reference: &WaveProfile) -> f64 {
        let mut total = 0.0;
        for (i, (row, w)) in self.f.iter().zip(measure.weights()).enumerate() {
            let s: f64 = self.z.iter().zip(row).map(|(&z, &f)| (f - reference.eval_f(z, i)).abs()).sum();
            total += w * s * self.dz;
        }
        total
    }

    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().map_or(f64::INFINITY, |r| r.1)
    }
}

/// Cell centres of the uniform grid used by [`relax_to_steady`].
pub fn relax_grid(half_width: f64, nz: usize) -> (Vec<f64>, f64) {
    let dz = 2.0 * half_width / nz as f64;
    ((0..nz).map(|j| -half_width + (j as f64 + 0.5) * dz).collect(), dz)
}

struct Operator<'a> {
    drift: Vec<f64>,
    weights: &'a [f64],
    /// Rates per velocity on `z < 0` and `z > 0`.
    rates: Vec<[f64; 2]>,
    /// Number of cells with `z < 0`.
    split: usize,
    dz: f64,
}

impl Operator<'_> {
    fn apply(&self, f: &[Vec<f64>], out: &mut [Vec<f64>], tumble: &mut [f64]) {
        let nz = tumble.len();
        for (j, t) in tumble.iter_mut().enumerate() {
            let side = usize::from(j >= self.split);
            *t = f.iter().zip(self.weights).zip(&self.rates).map(|((row, w), r)| w * r[side] * row[j]).sum();
        }
        let h2 = 2.0 * self.dz;
        for (i, (row, o)) in f.iter().zip(out.iter_mut()).enumerate() {
            let a = self.drift[i];
            let at = |j: isize| if j >= 0 && (j as usize) < nz { row[j as usize] } else { 0.0 };
            for j in 0..nz {
                let ji = j as isize;
                let dfdz = if a > 0.0 {
                    (3.0 * row[j] - 4.0 * at(ji - 1) + at(ji - 2)) / h2
                } else {
                    (-3.0 * row[j] + 4.0 * at(ji + 1) - at(ji + 2)) / h2
                };
                let side = usize::from(j >= self.split);
                o[j] = tumble[j] - self.rates[i][side] * row[j] - a * dfdz;
            }
        }
    }
}

fn mass(f: &[Vec<f64>], weights: &[f64], dz: f64) -> f64 {
    f.iter().zip(weights).map(|(row, w)| w * row.iter().sum::<f64>()).sum::<f64>() * dz
}

/// March `initial` (rows per velocity, `nz` cells each) to steady state.
pub fn relax_to_steady(
    measure: &VelocityMeasure,
    params: &KineticParams,
    c: f64,
    initial: Vec<Vec<f64>>,
    opts: &RelaxOptions,
) -> Result<RelaxResult> {
    let n = measure.len();
    let scale = measure.speed_scale();
    if measure.nearest(c).1 <= COLLISION_TOL * scale {
        return Err(Error::Collision { c, index: measure.nearest(c).0, velocity: measure.velocities()[measure.nearest(c).0] });
    }
    if !(opts.half_width > 0.0) || opts.nz < 4 || !(opts.t_end > 0.0) || opts.sample_every == 0 {
        return Err(Error::InvalidInput("relaxation needs L > 0, nz >= 4, t_end > 0".into()));
    }
    if initial.len() != n || initial.iter().any(|r| r.len() != opts.nz) {
        return Err(Error::InvalidInput(format!("initial data must be {n} rows of {} cells", opts.nz)));
    }
    if initial.iter().flatten().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidInput("initial data must be finite and nonnegative".into()));
    }
    let (z, dz) = relax_grid(opts.half_width, opts.nz);
    let drift: Vec<f64> = measure.velocities().iter().map(|v| v - c).collect();
    let limit = STABLE_COURANT * dz / drift.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let dt = opts.dt.unwrap_or(opts.courant / STABLE_COURANT * limit);
    if !(dt > 0.0) || dt > limit {
        return Err(Error::Cfl { dt, limit });
    }
    let r = params.rates();
    let op = Operator {
        rates: drift.iter().map(|&d| [r.at(Sign::Minus, d), r.at(Sign::Plus, d)]).collect(),
        drift,
        weights: measure.weights(),
        split: z.partition_point(|&x| x < 0.0),
        dz,
    };
    let mut f = initial;
    let m0 = mass(&f, op.weights, dz);
    if !(m0 > 0.0) {
        return Err(Error::InvalidInput("initial data has zero mass".into()));
    }
    f.iter_mut().flatten().for_each(|x| *x /= m0);

    let mut k1 = vec![vec![0.0; opts.nz]; n];
    let mut k2 = vec![vec![0.0; opts.nz]; n];
    let mut stage = vec![vec![0.0; opts.nz]; n];
    let mut tumble = vec![0.0; opts.nz];
    let mut history = Vec::new();
    let mut best = f64::INFINITY;
    let mut t = 0.0;
    let mut step = 0usize;
    let mut converged = false;
    loop {
        op.apply(&f, &mut k1, &mut tumble);
        if step % opts.sample_every == 0 || t >= opts.t_end {
            // Rate at which renormalization rescales f; a steady state of the
            // normalized flow satisfies f_t = sigma f rather than f_t = 0.
            let sigma = mass(&k1, op.weights, dz) / mass(&f, op.weights, dz);
            let top = f.iter().flatten().fold(0.0f64, |m, x| m.max(*x));
            let res = k1
                .iter()
                .zip(&f)
                .flat_map(|(k, row)| k.iter().zip(row).map(move |(d, x)| (d - sigma * x).abs()))
                .fold(0.0f64, f64::max)
                / top;
            if !res.is_finite() {
                return Err(Error::Numerical(format!("relaxation produced non-finite values at t = {t}")));
            }
            if res > 1e6 * best {
                return Err(Error::Numerical(format!("relaxation diverging at t = {t}: residual {res}")));
            }
            best = best.min(res);
            history.push((t, res));
            if res < opts.tol {
                converged = true;
                break;
            }
            if t >= opts.t_end {
                break;
            }
        }
        for ((s, row), k) in stage.iter_mut().zip(&f).zip(&k1) {
            for ((s, x), d) in s.iter_mut().zip(row).zip(k) {
                *s = x + dt * d;
            }
        }
        op.apply(&stage, &mut k2, &mut tumble);
        for ((row, a), b) in f.iter_mut().zip(&k1).zip(&k2) {
            for ((x, a), b) in row.iter_mut().zip(a).zip(b) {
                *x += 0.5 * dt * (a + b);
            }
        }
        let m = mass(&f, op.weights, dz);
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Numerical(format!("mass lost at t = {t}")));
        }
        f.iter_mut().flatten().for_each(|x| *x /= m);
        t += dt;
        step += 1;
    }
    Ok(RelaxResult { c, z, dz, f, residual_history: history, t_final: t, converged })
}

/// Rows `f(z_j, v_i)` of a modal profile sampled on the relaxation grid.
pub fn sample_profile(profile: &WaveProfile, z: &[f64]) -> Vec<Vec<f64>> {
    (0..profile.measure().len()).map(|i| z.iter().map(|&x| profile.eval_f(x, i)).collect()).collect()
}
