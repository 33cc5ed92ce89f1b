//! Run configuration: TOML or JSON files, named presets, and their merge.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::FieldParams;
use crate::kinetics::KineticParams;
use crate::measure::{quadrature, Density, DensitySpec, QuadratureRule, VelocityMeasure};
use crate::oracles::RelaxOptions;

pub const PRESETS: [&str; 6] = ["fig3", "fig5", "fig7", "fig8", "fig9", "fig10"];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "l")]
    pub half_width: Option<f64>,
    pub nz: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxConfig {
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub courant: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

/// Every field is optional so that layers can be merged; see [`RunConfig::overlay`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub velocities: Option<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
    pub density: Option<DensitySpec>,
    pub n: Option<usize>,
    pub rule: Option<QuadratureRule>,
    pub chi_s: Option<f64>,
    pub chi_n: Option<f64>,
    pub alpha: Option<f64>,
    pub d_s: Option<f64>,
    pub gamma: Option<f64>,
    pub d_n: Option<f64>,
    pub n_plus: Option<f64>,
    pub d_rho: Option<f64>,
    pub c: Option<f64>,
    pub dc: Option<f64>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub relax: RelaxConfig,
    pub out: Option<PathBuf>,
}

macro_rules! take {
    ($dst:expr, $src:expr, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    /// `.json` files are read as JSON, everything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    /// Fields set in `top` replace those in `self`. Giving either an inline
    /// measure or a density in `top` discards the other form from `self`.
    pub fn overlay(mut self, top: &RunConfig) -> RunConfig {
        if top.velocities.is_some() || top.weights.is_some() {
            self.density = None;
            self.n = None;
            self.rule = None;
        }
        if top.density.is_some() {
            self.velocities = None;
            self.weights = None;
        }
        take!(self, top, preset, velocities, weights, density, n, rule, chi_s, chi_n, alpha, d_s, gamma, d_n, n_plus, d_rho, c, dc, out);
        take!(self.grid, top.grid, half_width, nz);
        take!(self.relax, top.relax, dt, t_end, courant, tol, seed);
        self
    }

    pub fn measure(&self) -> Result<VelocityMeasure> {
        match (&self.velocities, &self.density) {
            (Some(_), Some(_)) => Err(Error::InvalidInput("give either velocities or density, not both".into())),
            (Some(v), None) => {
                let w = self.weights.clone().unwrap_or_else(|| vec![1.0; v.len()]);
                VelocityMeasure::new(v, &w)
            }
            (None, Some(d)) => {
                let n = self.n.ok_or_else(|| Error::InvalidInput("density needs a node count n".into()))?;
                quadrature(d, n, self.rule.unwrap_or_default())
            }
            (None, None) => Err(Error::InvalidInput("no velocity measure: set velocities or density".into())),
        }
    }

    pub fn kinetic(&self) -> Result<KineticParams> {
        KineticParams::new(required(self.chi_s, "chi_s")?, required(self.chi_n, "chi_n")?)
    }

    pub fn fields(&self) -> Result<FieldParams> {
        let p = FieldParams {
            alpha: required(self.alpha, "alpha")?,
            d_s: required(self.d_s, "d_s")?,
            gamma: self.gamma.unwrap_or(1.0),
            d_n: self.d_n.unwrap_or(1.0),
            n_plus: self.n_plus.unwrap_or(1.0),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn relax_options(&self) -> RelaxOptions {
        let d = RelaxOptions::default();
        RelaxOptions {
            half_width: self.grid.half_width.unwrap_or(d.half_width),
            nz: self.grid.nz.unwrap_or(d.nz),
            dt: self.relax.dt,
            courant: self.relax.courant.unwrap_or(d.courant),
            t_end: self.relax.t_end.unwrap_or(d.t_end),
            tol: self.relax.tol.unwrap_or(d.tol),
            sample_every: d.sample_every,
        }
    }

    /// Checks that every part resolves.
    pub fn validate(&self) -> Result<()> {
        self.measure()?;
        self.kinetic()?;
        self.fields()?;
        if let Some(d) = self.d_rho {
            if !(d > 0.0) {
                return Err(Error::InvalidParams(format!("d_rho = {d} must be positive")));
            }
        }
        if let Some(dc) = self.dc {
            if !(dc > 0.0 && dc.is_finite()) {
                return Err(Error::InvalidParams(format!("dc = {dc} must be positive")));
            }
        }
        Ok(())
    }
}

fn required(x: Option<f64>, name: &str) -> Result<f64> {
    x.ok_or_else(|| Error::InvalidInput(format!("missing parameter {name}")))
}

fn fig8_base() -> RunConfig {
    RunConfig {
        velocities: Some(vec![-1.0, -0.5, 0.5, 1.0]),
        weights: Some(vec![1.0; 4]),
        chi_s: Some(0.48),
        chi_n: Some(0.44),
        alpha: Some(50.0),
        d_s: Some(0.5),
        ..RunConfig::default()
    }
}

/// Four-point measure `{-1, -vmin, vmin, 1}` with equal weights.
pub fn four_velocities(vmin: f64) -> Vec<f64> {
    vec![-1.0, -vmin, vmin, 1.0]
}

/// Parameters of a named preset.
pub fn preset(name: &str) -> Result<RunConfig> {
    let mut cfg = match name {
        "fig3" => RunConfig {
            density: Some(DensitySpec::new(Density::Uniform)),
            n: Some(64),
            rule: Some(QuadratureRule::Midpoint),
            chi_s: Some(0.48),
            chi_n: Some(0.0),
            alpha: Some(50.0),
            d_s: Some(0.5),
            ..RunConfig::default()
        },
        "fig5" | "fig7" | "fig8" => fig8_base(),
        "fig9" => RunConfig { velocities: Some(four_velocities(0.5)), ..fig8_base() },
        "fig10" => RunConfig {
            velocities: None,
            weights: None,
            density: Some(DensitySpec::new(Density::ExpBump { amplitude: 5.0, rate: 4.0 })),
            n: Some(200),
            rule: Some(QuadratureRule::Midpoint),
            dc: Some(0.01 / 3.0),
            ..fig8_base()
        },
        _ => {
            return Err(Error::InvalidInput(format!("unknown preset {name:?}; known: {}", PRESETS.join(", "))));
        }
    };
    cfg.preset = Some(name.to_string());
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let t = RunConfig::from_toml(
            "velocities = [-1.0, 1.0]\nchi_s = 0.48\nchi_n = 0.44\nalpha = 50.0\nd_s = 0.5\n[grid]\nl = 20.0\nnz = 100\n",
        )
        .unwrap();
        let j = RunConfig::from_json(
            r#"{"velocities":[-1.0,1.0],"chi_s":0.48,"chi_n":0.44,"alpha":50.0,"d_s":0.5,"grid":{"l":20.0,"nz":100}}"#,
        )
        .unwrap();
        assert_eq!(t, j);
        t.validate().unwrap();
        assert_eq!(t.relax_options().nz, 100);
    }

    #[test]
    fn density_table() {
        let t = RunConfig::from_toml(
            "density = { kind = \"exp-bump\", amplitude = 5.0, rate = 4.0 }\nn = 10\nrule = \"gauss-legendre\"\n",
        )
        .unwrap();
        assert_eq!(t.measure().unwrap().len(), 10);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(RunConfig::from_toml("chi = 1.0").is_err());
    }

    #[test]
    fn overlay_replaces_measure_form() {
        let file = RunConfig { density: Some(DensitySpec::new(Density::Uniform)), n: Some(8), ..RunConfig::default() };
        let merged = preset("fig8").unwrap().overlay(&file);
        assert!(merged.velocities.is_none());
        assert_eq!(merged.measure().unwrap().len(), 8);
        assert_eq!(merged.chi_n, Some(0.44));
    }

    #[test]
    fn presets_validate() {
        for name in PRESETS {
            preset(name).unwrap().validate().unwrap();
        }
        assert!(preset("fig4").is_err());
    }
}
