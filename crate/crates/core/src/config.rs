//! Run configuration: the surface, truncation, quadrature sizes and the
//! tolerance of every check a suite performs.

use serde::{Deserialize, Serialize};

use crate::contour::DEFAULT_NODES;
use crate::error::{Error, Result};
use crate::gem::GemOptions;
use crate::poincare::{SeriesConfig, Surface};
use crate::schottky::{SchottkyParams, DEFAULT_WORD_CAP};
use crate::C64;

/// Pass thresholds, one per named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub cocycle: f64,
    pub pullback_law: f64,
    pub coboundary_decomposition: f64,
    pub residue: f64,
    pub periodicity: f64,
    pub quasi_period_fit: f64,
    pub holomorphy: f64,
    pub annihilation: f64,
    pub duality: f64,
    pub normalization: f64,
    pub quasi_period_match: f64,
    pub global_sum: f64,
    pub group_element: f64,
    pub nu_normalization: f64,
    pub base_point: f64,
    pub symmetry: f64,
    pub transport: f64,
    pub genus_one: f64,
    pub rauch: f64,
    pub gem_invariance: f64,
    pub sl2: f64,
    pub derivative_identity: f64,
    pub covariance: f64,
    pub rank_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cocycle: 1e-10,
            pullback_law: 1e-10,
            coboundary_decomposition: 1e-10,
            residue: 1e-8,
            periodicity: 1e-6,
            quasi_period_fit: 1e-8,
            holomorphy: 1e-9,
            annihilation: 1e-8,
            duality: 1e-8,
            normalization: 1e-8,
            quasi_period_match: 1e-7,
            global_sum: 1e-8,
            group_element: 1e-7,
            nu_normalization: 1e-8,
            base_point: 1e-8,
            symmetry: 1e-7,
            transport: 1e-6,
            genus_one: 1e-8,
            rauch: 1e-4,
            gem_invariance: 1e-6,
            sl2: 1e-6,
            derivative_identity: 1e-6,
            covariance: 1e-5,
            rank_gap: 1e6,
        }
    }
}

impl Tolerances {
    fn all(&self) -> [(&'static str, f64); 24] {
        [
            ("cocycle", self.cocycle),
            ("pullback_law", self.pullback_law),
            ("coboundary_decomposition", self.coboundary_decomposition),
            ("residue", self.residue),
            ("periodicity", self.periodicity),
            ("quasi_period_fit", self.quasi_period_fit),
            ("holomorphy", self.holomorphy),
            ("annihilation", self.annihilation),
            ("duality", self.duality),
            ("normalization", self.normalization),
            ("quasi_period_match", self.quasi_period_match),
            ("global_sum", self.global_sum),
            ("group_element", self.group_element),
            ("nu_normalization", self.nu_normalization),
            ("base_point", self.base_point),
            ("symmetry", self.symmetry),
            ("transport", self.transport),
            ("genus_one", self.genus_one),
            ("rauch", self.rauch),
            ("gem_invariance", self.gem_invariance),
            ("sl2", self.sl2),
            ("derivative_identity", self.derivative_identity),
            ("covariance", self.covariance),
            ("rank_gap", self.rank_gap),
        ]
    }
}

fn default_n() -> usize {
    2
}
fn default_max_len() -> usize {
    10
}
fn default_shell_tol() -> f64 {
    1e-12
}
fn default_nodes() -> usize {
    DEFAULT_NODES
}
fn default_step() -> f64 {
    crate::variation::DEFAULT_STEP
}
fn default_samples() -> usize {
    3
}
fn default_cap() -> usize {
    DEFAULT_WORD_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SchottkyParams,
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
    #[serde(rename = "L", default = "default_max_len")]
    pub max_len: usize,
    #[serde(default = "default_shell_tol")]
    pub shell_tol: f64,
    #[serde(default = "default_cap")]
    pub word_cap: usize,
    /// Trapezoid nodes per isometric circle.
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    /// Finite-difference step for moduli derivatives.
    #[serde(default = "default_step")]
    pub h: f64,
    /// Number of x-samples for Rauch and quasi-period checks.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(rename = "J", default)]
    pub j_override: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    pub punctures: Vec<C64>,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(surface: SchottkyParams) -> Self {
        Self {
            surface,
            n: default_n(),
            max_len: default_max_len(),
            shell_tol: default_shell_tol(),
            word_cap: default_cap(),
            nodes: default_nodes(),
            h: default_step(),
            samples: default_samples(),
            tolerances: Tolerances::default(),
            j_override: None,
            punctures: Vec::new(),
            seed: 0,
        }
    }

    /// Parses a run config, or a bare surface document (`genus`, `handles`)
    /// with every other field defaulted.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let cfg = if value.get("surface").is_some() {
            serde_json::from_value(value)?
        } else {
            Self::new(serde_json::from_value(value)?)
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("N must be at least 2, got {}", self.n)));
        }
        if self.max_len < 1 {
            return Err(Error::Config("L must be at least 1".into()));
        }
        if self.nodes < 16 || !self.nodes.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "nodes must be even and at least 16, got {}",
                self.nodes
            )));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        let positive = [("shell_tol", self.shell_tol), ("h", self.h)];
        for (name, v) in positive.into_iter().chain(self.tolerances.all()) {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn series(&self) -> SeriesConfig {
        SeriesConfig {
            max_len: self.max_len,
            shell_tol: self.shell_tol,
            cap: self.word_cap,
        }
    }

    /// Validates the surface and enumerates its words.
    pub fn build_surface(&self) -> Result<Surface> {
        Surface::new(self.surface.clone(), self.series())
    }

    pub fn gem_options(&self) -> GemOptions {
        GemOptions {
            n_nodes: self.nodes,
            j_override: self.j_override.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::reference_surface;

    #[test]
    fn bare_surface_document() {
        let cfg = RunConfig::from_json(&reference_surface().to_json()).unwrap();
        assert_eq!(cfg.n, 2);
        assert_eq!(cfg.max_len, 10);
        assert_eq!(cfg.surface, reference_surface());
    }

    #[test]
    fn round_trip_and_overrides() {
        let mut cfg = RunConfig::new(reference_surface());
        cfg.tolerances.rauch = 1e-3;
        cfg.j_override = Some(vec![(1, 0), (1, 1), (2, 2)]);
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"J\""));
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = RunConfig::new(reference_surface());
        cfg.tolerances.residue = 0.0;
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(matches!(RunConfig::from_json(&text), Err(Error::Config(_))));
        let text = text.replace("\"N\":2", "\"N\":1");
        assert!(RunConfig::from_json(&text).is_err());
    }
}
