#![allow(dead_code)]

use kinwave::{critical_speeds, KineticParams, VelocityMeasure};
use rand::Rng;

pub const FIG8_VELOCITIES: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];

pub fn fig8() -> (VelocityMeasure, KineticParams) {
    (VelocityMeasure::new(&FIG8_VELOCITIES, &[1.0; 4]).unwrap(), KineticParams::new(0.48, 0.44).unwrap())
}

pub fn two_velocity() -> VelocityMeasure {
    VelocityMeasure::new(&[-1.0, 1.0], &[1.0, 1.0]).unwrap()
}

/// Sorted velocities in (-1, 1) with gaps at least `min_gap`.
pub fn random_velocities<R: Rng>(rng: &mut R, n: usize, min_gap: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            return v;
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub measure: VelocityMeasure,
    pub params: KineticParams,
    pub c: f64,
}

/// A random admissible `(measure, params, c)` with `2 <= N <= max_n` and `c`
/// at least `margin` away from every velocity.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize, margin: f64) -> Instance {
    loop {
        let n = rng.random_range(2..=max_n);
        let v = random_velocities(rng, n, 0.02);
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        let Ok(measure) = VelocityMeasure::new(&v, &w) else { continue };
        let chi_s = rng.random_range(0.01..0.49);
        let chi_n = rng.random_range(0.0..0.49);
        let params = KineticParams::new(chi_s, chi_n).unwrap();
        let Ok(window) = critical_speeds(&measure, &params) else { continue };
        let width = window.c_hi - window.c_lo;
        for _ in 0..20 {
            let c = window.c_lo + width * rng.random_range(0.01..0.99);
            if measure.nearest(c).1 >= margin {
                return Instance { measure, params, c };
            }
        }
    }
}
