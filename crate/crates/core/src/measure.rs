//! Discrete velocity measures.
//!
//! A [`VelocityMeasure`] is a finite set of Dirac masses with positive
//! weights summing to one. It is built either from explicit lists
//! ([`VelocityMeasure::new`]) or by discretizing a density on a symmetric
//! support ([`quadrature`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used to decide whether a measure is invariant under `v -> -v`.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityMeasure {
    velocities: Vec<f64>,
    weights: Vec<f64>,
    symmetric: bool,
}

impl VelocityMeasure {
    /// Builds a normalized measure from (velocity, weight) lists. Pairs are
    /// sorted by velocity; weights are rescaled to total mass one.
    pub fn new(velocities: &[f64], weights: &[f64]) -> Result<Self> {
        if velocities.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} velocities but {} weights",
                velocities.len(),
                weights.len()
            )));
        }
        if velocities.len() < 2 {
            return Err(Error::InvalidMeasure(format!(
                "need at least two velocities, got {}",
                velocities.len()
            )));
        }
        let mut pairs: Vec<(f64, f64)> = velocities.iter().copied().zip(weights.iter().copied()).collect();
        for &(v, w) in &pairs {
            if !v.is_finite() || !w.is_finite() {
                return Err(Error::InvalidMeasure("non-finite velocity or weight".into()));
            }
            if w <= 0.0 {
                return Err(Error::InvalidMeasure(format!("weight {w} at v = {v} is not positive")));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMeasure(format!("duplicate velocity {}", w[0].0)));
        }
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        let velocities: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let weights: Vec<f64> = pairs.iter().map(|p| p.1 / total).collect();
        let symmetric = detect_symmetry(&velocities, &weights);
        Ok(VelocityMeasure { velocities, weights, symmetric })
    }

    pub fn velocities(&self) -> &[f64] {
        &self.velocities
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.velocities.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Largest velocity of the support.
    pub fn max_velocity(&self) -> f64 {
        self.velocities[self.len() - 1]
    }

    pub fn min_velocity(&self) -> f64 {
        self.velocities[0]
    }

    /// Largest |v|; used as the unit for every speed tolerance.
    pub fn speed_scale(&self) -> f64 {
        self.min_velocity().abs().max(self.max_velocity().abs())
    }

    /// Number of velocities strictly below `c`.
    pub fn count_below(&self, c: f64) -> usize {
        self.velocities.partition_point(|&v| v < c)
    }

    /// `<g> = sum_i w_i g_i` for a profile given on the velocity nodes.
    pub fn average(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, g)| w * g).sum()
    }

    /// Index of `-v_i` for a symmetric measure.
    pub fn mirror_index(&self, i: usize) -> usize {
        self.len() - 1 - i
    }

    /// Index of the velocity closest to `c` and its distance.
    pub fn nearest(&self, c: f64) -> (usize, f64) {
        self.velocities
            .iter()
            .enumerate()
            .map(|(i, v)| (i, (v - c).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("measure has at least two velocities")
    }
}

fn detect_symmetry(v: &[f64], w: &[f64]) -> bool {
    let n = v.len();
    (0..n).all(|i| {
        let j = n - 1 - i;
        (v[i] + v[j]).abs() <= SYMMETRY_TOL && (w[i] - w[j]).abs() <= SYMMETRY_TOL
    })
}

/// Shape of a continuous velocity density on `[-support, support]`.
///
/// The shapes are written for the unit interval and rescaled to the support;
/// normalization happens after discretization so constants are irrelevant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Density {
    Uniform,
    /// `(1/pi) (1 - v^2)^(-1/2)`, singular at the endpoints.
    Semicircle,
    /// Projection of the uniform law on the unit circle; same law as `Semicircle`.
    CircleProjection,
    /// Projection of the uniform law on the unit disk: `(2/pi) (1 - v^2)^(1/2)`.
    DiskProjection,
    /// Projection of the uniform law on the unit ball: `(3/4) (1 - v^2)`.
    Ball3dProjection,
    /// `1 + amplitude * exp(-rate |v|)`.
    ExpBump { amplitude: f64, rate: f64 },
    /// Piecewise-linear density through `(velocities[k], values[k])`, zero outside.
    CustomTable { velocities: Vec<f64>, values: Vec<f64> },
}

impl Density {
    /// Density value at `v` for support half-width `support`.
    pub fn eval(&self, v: f64, support: f64) -> f64 {
        let x = v / support;
        match self {
            Density::Uniform => 0.5 / support,
            Density::Semicircle | Density::CircleProjection => {
                if x.abs() >= 1.0 {
                    f64::INFINITY
                } else {
                    (1.0 - x * x).powf(-0.5) / (std::f64::consts::PI * support)
                }
            }
            Density::DiskProjection => {
                2.0 * (1.0 - x * x).max(0.0).sqrt() / (std::f64::consts::PI * support)
            }
            Density::Ball3dProjection => 0.75 * (1.0 - x * x) / support,
            Density::ExpBump { amplitude, rate } => 1.0 + amplitude * (-rate * v.abs()).exp(),
            Density::CustomTable { velocities, values } => interpolate(velocities, values, v),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Density::ExpBump { amplitude, rate } if !amplitude.is_finite() || !rate.is_finite() => {
                Err(Error::InvalidMeasure("exp-bump parameters must be finite".into()))
            }
            Density::CustomTable { velocities, values } => {
                if velocities.len() != values.len() || velocities.len() < 2 {
                    return Err(Error::InvalidMeasure(
                        "custom table needs at least two (velocity, value) pairs of equal length".into(),
                    ));
                }
                if velocities.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::InvalidMeasure("custom table velocities must be increasing".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let k = xs.partition_point(|&t| t <= x).clamp(1, xs.len() - 1);
    let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    ys[k - 1] + t * (ys[k] - ys[k - 1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    #[serde(flatten)]
    pub density: Density,
    /// Half-width of the support `[-support, support]`.
    #[serde(default = "unit_support")]
    pub support: f64,
}

fn unit_support() -> f64 {
    1.0
}

impl DensitySpec {
    pub fn new(density: Density) -> Self {
        DensitySpec { density, support: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    /// Cell midpoints; never samples the support endpoints.
    #[default]
    Midpoint,
    GaussLegendre,
}

/// Discretizes a density into `n` Dirac masses.
pub fn quadrature(spec: &DensitySpec, n: usize, rule: QuadratureRule) -> Result<VelocityMeasure> {
    spec.density.validate()?;
    if !(spec.support > 0.0) || !spec.support.is_finite() {
        return Err(Error::InvalidMeasure(format!("support {} must be positive", spec.support)));
    }
    if n < 2 {
        return Err(Error::InvalidMeasure(format!("quadrature needs n >= 2, got {n}")));
    }
    let a = spec.support;
    let (nodes, rule_weights): (Vec<f64>, Vec<f64>) = match rule {
        QuadratureRule::Midpoint => {
            let h = 2.0 * a / n as f64;
            (0..n).map(|i| (-a + h * (i as f64 + 0.5), h)).unzip()
        }
        QuadratureRule::GaussLegendre => {
            let (x, w) = gauss_legendre(n);
            (x.iter().map(|x| a * x).collect(), w.iter().map(|w| a * w).collect())
        }
    };
    let mut weights = Vec::with_capacity(n);
    for (v, rw) in nodes.iter().zip(&rule_weights) {
        let d = spec.density.eval(*v, a);
        if !d.is_finite() || d < 0.0 {
            return Err(Error::InvalidMeasure(format!("density evaluates to {d} at v = {v}")));
        }
        weights.push(rw * d);
    }
    // Nodes with zero density carry no mass and would break positivity.
    let (v, w): (Vec<f64>, Vec<f64>) =
        nodes.into_iter().zip(weights).filter(|(_, w)| *w > 0.0).unzip();
    let mut measure = VelocityMeasure::new(&v, &w)?;
    // Quadrature nodes of a symmetric rule are symmetric up to rounding; snap them.
    if !measure.symmetric && is_even(&spec.density) {
        let n = measure.len();
        let near = (0..n).all(|i| {
            let j = n - 1 - i;
            (measure.velocities[i] + measure.velocities[j]).abs() <= 1e-9 * a
                && (measure.weights[i] - measure.weights[j]).abs() <= 1e-9
        });
        if near {
            for i in 0..n / 2 {
                let j = n - 1 - i;
                let v = 0.5 * (measure.velocities[j] - measure.velocities[i]);
                let w = 0.5 * (measure.weights[i] + measure.weights[j]);
                measure.velocities[i] = -v;
                measure.velocities[j] = v;
                measure.weights[i] = w;
                measure.weights[j] = w;
            }
            measure.symmetric = true;
        }
    }
    Ok(measure)
}

fn is_even(d: &Density) -> bool {
    !matches!(d, Density::CustomTable { .. })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, increasing nodes.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `(P_n(t), P_n'(t))` by the three-term recurrence.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, dp)
}
