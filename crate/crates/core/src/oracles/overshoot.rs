//! Velocities whose profile peaks away from the origin.

use serde::Serialize;

use crate::transfer::WaveProfile;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OvershootReport {
    /// `argmax_z f(z, v_i)` on the sampled grid.
    pub argmax: Vec<f64>,
    /// Velocities peaking strictly right of the origin.
    pub right: Vec<usize>,
    /// Velocities peaking strictly left of the origin.
    pub left: Vec<usize>,
    /// Smallest `i` such that exactly the velocities `i..N` overshoot to the right.
    pub threshold: Option<usize>,
}

impl OvershootReport {
    pub fn present(&self) -> bool {
        !self.right.is_empty() || !self.left.is_empty()
    }
}

fn threshold(right: &[usize], n: usize) -> Option<usize> {
    let first = *right.first()?;
    (right.len() == n - first && right.iter().enumerate().all(|(k, &i)| i == first + k)).then_some(first)
}

/// From tabulated `f[i][j] = f(z_j, v_i)`.
pub fn overshoot_detect_gridded(z: &[f64], f: &[Vec<f64>]) -> OvershootReport {
    let mut argmax = Vec::with_capacity(f.len());
    let (mut right, mut left) = (Vec::new(), Vec::new());
    for (i, row) in f.iter().enumerate() {
        let j = (0..row.len()).fold(0, |b, j| if row[j] > row[b] { j } else { b });
        let zm = z.get(j).copied().unwrap_or(f64::NAN);
        argmax.push(zm);
        if zm > 0.0 {
            right.push(i);
        } else if zm < 0.0 {
            left.push(i);
        }
    }
    let threshold = threshold(&right, f.len());
    OvershootReport { argmax, right, left, threshold }
}

/// From a modal profile. The one-sided slopes at the origin are exact, so a
/// peak closer to the origin than the grid spacing is still detected.
pub fn overshoot_detect(profile: &WaveProfile, grid: &[f64]) -> OvershootReport {
    let n = profile.measure().len();
    let mut grid = grid.to_vec();
    if let Err(k) = grid.binary_search_by(|z| z.total_cmp(&0.0)) {
        grid.insert(k, 0.0);
    }
    let rows: Vec<Vec<f64>> = (0..n).map(|i| grid.iter().map(|&z| profile.eval_f(z, i)).collect()).collect();
    let mut report = overshoot_detect_gridded(&grid, &rows);
    let basis = profile.basis();
    for i in 0..n {
        let slope_right: f64 = -basis.right.iter().zip(profile.b()).map(|(m, b)| b * m.lambda * m.profile[i]).sum::<f64>();
        let slope_left: f64 = basis.left.iter().zip(profile.a()).map(|(m, a)| a * m.lambda * m.profile[i]).sum();
        if slope_right > 0.0 && !report.right.contains(&i) {
            report.right.push(i);
            report.left.retain(|&k| k != i);
        } else if slope_left < 0.0 && !report.left.contains(&i) {
            report.left.push(i);
            report.right.retain(|&k| k != i);
        }
    }
    report.right.sort_unstable();
    report.left.sort_unstable();
    report.threshold = threshold(&report.right, n);
    report
}
