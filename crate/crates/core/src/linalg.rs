//! Null space of a square matrix known to be singular.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Below this ratio of smallest to largest of the first `n - 1` pivots the
/// elimination result is replaced by a singular value decomposition.
pub const PIVOT_RATIO: f64 = 1e-8;

/// Singular values below this fraction of the largest count as zero.
pub const SINGULAR_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullMethod {
    Elimination,
    Svd,
}

#[derive(Debug, Clone)]
pub struct NullVector {
    pub vector: Vec<f64>,
    pub method: NullMethod,
    /// Smallest/largest retained pivot (or second-smallest/largest singular value).
    pub conditioning: f64,
}

/// One vector spanning the right null space of the `n x n` matrix `m`,
/// given row-major. Columns are equilibrated first; the returned vector is
/// in the original variables with unit max-norm.
pub fn null_vector(m: &[f64], n: usize) -> Result<NullVector> {
    if n == 0 || m.len() != n * n {
        return Err(Error::InvalidInput(format!("expected {n}x{n} matrix, got {} entries", m.len())));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite entry in transfer matrix".into()));
    }
    if n == 1 {
        return if m[0] == 0.0 {
            Ok(NullVector { vector: vec![1.0], method: NullMethod::Elimination, conditioning: 1.0 })
        } else {
            Err(Error::NullSpace(0))
        };
    }
    let mut scale = vec![0.0f64; n];
    for (j, s) in scale.iter_mut().enumerate() {
        *s = (0..n).map(|i| m[i * n + j].abs()).fold(0.0, f64::max);
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    let mut a: Vec<f64> = (0..n * n).map(|k| m[k] / scale[k % n]).collect();

    let (y, ratio) = eliminate(&mut a, n);
    let (mut x, method, conditioning) = match y {
        Some(y) if ratio >= PIVOT_RATIO => (y, NullMethod::Elimination, ratio),
        _ => {
            let eq: Vec<f64> = (0..n * n).map(|k| m[k] / scale[k % n]).collect();
            let (y, cond) = svd_null(&eq, n)?;
            (y, NullMethod::Svd, cond)
        }
    };
    for (xj, s) in x.iter_mut().zip(&scale) {
        *xj /= s;
    }
    let norm = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Numerical("null vector vanished".into()));
    }
    x.iter_mut().for_each(|v| *v /= norm);
    Ok(NullVector { vector: x, method, conditioning })
}

/// Full-pivot elimination of the first `n - 1` steps; back-substitution with
/// the last (free) variable set to one. Returns the solution and the pivot ratio.
fn eliminate(a: &mut [f64], n: usize) -> (Option<Vec<f64>>, f64) {
    let mut cols: Vec<usize> = (0..n).collect();
    let mut first = 0.0;
    let mut smallest = f64::INFINITY;
    for k in 0..n - 1 {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let v = a[i * n + j].abs();
                if v > best {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if k == 0 {
            first = best;
        }
        smallest = smallest.min(best);
        if best == 0.0 {
            return (None, 0.0);
        }
        if pi != k {
            for j in 0..n {
                a.swap(k * n + j, pi * n + j);
            }
        }
        if pj != k {
            for i in 0..n {
                a.swap(i * n + k, i * n + pj);
            }
            cols.swap(k, pj);
        }
        let p = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / p;
            if f != 0.0 {
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
    }
    let mut y = vec![0.0; n];
    y[n - 1] = 1.0;
    for k in (0..n - 1).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k * n + j] * y[j]).sum();
        y[k] = -s / a[k * n + k];
    }
    let mut x = vec![0.0; n];
    for (k, &c) in cols.iter().enumerate() {
        x[c] = y[k];
    }
    (Some(x), smallest / first)
}

fn svd_null(a: &[f64], n: usize) -> Result<(Vec<f64>, f64)> {
    let mat = DMatrix::from_row_slice(n, n, a);
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    let top = sv[order[n - 1]];
    let zeros = order.iter().filter(|&&i| sv[i] <= SINGULAR_TOL * top).count();
    if zeros > 1 {
        return Err(Error::NullSpace(zeros));
    }
    let row = order[0];
    let y = (0..n).map(|j| v_t[(row, j)]).collect();
    Ok((y, sv[order[1]] / top))
}
