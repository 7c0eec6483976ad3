//! Scenario configuration (TOML).
//!
//! ```toml
//! seed = 7
//!
//! [kernel]
//! type = "fractional"
//! s = 0.5
//! truncation_radius = 16.0
//!
//! [geometry]
//! spacing = 1.0
//! extents = [128, 128]
//!
//! [shape]
//! type = "disk"
//! center = [0.0, 0.0]
//! radius = 40.0
//!
//! [experiment]
//! kind = "flow"
//! h = 4.0
//! t_max = 2000.0
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::atw::Mode;
use crate::error::{Error, Result};
use crate::gridset::GridGeometry;
use crate::kernel::{build_compact_kernel, build_fractional_kernel, InteractionTable, RadialProfile};
use crate::shapes::Shape;

fn default_q_tol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KernelConfig {
    Fractional {
        s: f64,
        truncation_radius: f64,
        #[serde(default = "default_q_tol")]
        q_tol: f64,
    },
    /// Piecewise-linear radial profile through `(radii[i], values[i])`.
    Compact {
        radii: Vec<f64>,
        values: Vec<f64>,
        #[serde(default = "default_q_tol")]
        q_tol: f64,
    },
}

impl KernelConfig {
    pub fn build(&self, dim: usize, spacing: f64) -> Result<InteractionTable> {
        match self {
            KernelConfig::Fractional { s, truncation_radius, q_tol } => build_fractional_kernel(dim, *s, spacing, *truncation_radius, *q_tol),
            KernelConfig::Compact { radii, values, q_tol } => {
                build_compact_kernel(dim, &RadialProfile::new(radii.clone(), values.clone())?, spacing, *q_tol)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub spacing: f64,
    pub extents: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FocusConfig {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelInit {
    /// Signed distance to the shape, positive inside.
    #[default]
    Distance,
    /// `χ_E`.
    Indicator,
}

fn default_delta_tol() -> f64 {
    1e-3
}

fn default_lambda_count() -> usize {
    4
}

fn default_max_steps() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    Flow {
        h: f64,
        t_max: f64,
        #[serde(default)]
        mode: Mode,
        /// Write a snapshot every this many steps; 0 disables snapshots.
        #[serde(default)]
        snapshot_every: usize,
        /// Treat `E_{k+1} ⊄ E_k` as a property violation.
        #[serde(default)]
        require_nested: bool,
    },
    HSweep {
        h: Vec<f64>,
        t_max: f64,
        #[serde(default)]
        mode: Mode,
    },
    Certify {
        #[serde(default = "default_delta_tol")]
        delta_tol: f64,
        /// Compute the strong constant when minimizing.
        #[serde(default)]
        strong: bool,
    },
    ConvexityReport {
        lambda_max: f64,
        #[serde(default = "default_lambda_count")]
        lambda_count: usize,
        curv_tol: Option<f64>,
        focus: Option<FocusConfig>,
    },
    LevelFunction {
        h: f64,
        steps: usize,
        /// Quantization step of the initial function.
        quantum: f64,
        #[serde(default)]
        initial: LevelInit,
    },
    CorollaryIntegral {
        h: f64,
        #[serde(default = "default_max_steps")]
        max_steps: usize,
        /// Random cell pairs checked against the Lipschitz-type bound.
        #[serde(default)]
        lipschitz_pairs: usize,
        /// Strong constant for the bound; measured when absent.
        lipschitz_delta: Option<f64>,
        #[serde(default = "default_delta_tol")]
        delta_tol: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub seed: u64,
    /// Output directory, relative to the config file.
    pub output: Option<PathBuf>,
    pub kernel: KernelConfig,
    pub geometry: GeometryConfig,
    pub shape: Shape,
    /// Flexible region; defaults to the box minus its outer ring.
    pub omega: Option<Shape>,
    pub experiment: Experiment,
}

fn positive(value: f64, what: &str) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} must be positive, got {value}")))
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parameter checks that need no kernel or rasterization.
    pub fn validate(&self) -> Result<()> {
        let dim = self.geometry.extents.len();
        self.shape.validate(dim)?;
        if let Some(o) = &self.omega {
            o.validate(dim)?;
        }
        match &self.experiment {
            Experiment::Flow { h, t_max, .. } => {
                positive(*h, "h")?;
                positive(*t_max, "t_max")?;
            }
            Experiment::HSweep { h, t_max, .. } => {
                if h.len() < 3 {
                    return Err(Error::InvalidParameter(format!("an h-sweep needs at least 3 values of h, got {}", h.len())));
                }
                for &v in h {
                    positive(v, "h")?;
                }
                if h.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(Error::InvalidParameter("h values must be strictly decreasing".into()));
                }
                positive(*t_max, "t_max")?;
            }
            Experiment::Certify { delta_tol, .. } => positive(*delta_tol, "delta_tol")?,
            Experiment::ConvexityReport { lambda_max, lambda_count, curv_tol, focus } => {
                positive(*lambda_max, "lambda_max")?;
                if *lambda_count == 0 {
                    return Err(Error::InvalidParameter("lambda_count must be at least 1".into()));
                }
                if let Some(c) = curv_tol {
                    if !(c.is_finite() && *c >= 0.0) {
                        return Err(Error::InvalidParameter(format!("curv_tol must be nonnegative, got {c}")));
                    }
                }
                if let Some(f) = focus {
                    if f.center.len() != dim {
                        return Err(Error::InvalidParameter("focus center dimension differs from the grid".into()));
                    }
                    positive(f.radius, "focus radius")?;
                }
            }
            Experiment::LevelFunction { h, quantum, .. } => {
                positive(*h, "h")?;
                positive(*quantum, "quantum")?;
            }
            Experiment::CorollaryIntegral { h, max_steps, lipschitz_delta, delta_tol, .. } => {
                positive(*h, "h")?;
                positive(*delta_tol, "delta_tol")?;
                if *max_steps == 0 {
                    return Err(Error::InvalidParameter("max_steps must be at least 1".into()));
                }
                if let Some(d) = lipschitz_delta {
                    positive(*d, "lipschitz_delta")?;
                }
            }
        }
        Ok(())
    }

    /// Grid with the configured flexible region.
    pub fn geometry(&self, base: Option<&Path>) -> Result<Arc<GridGeometry>> {
        let g = GridGeometry::new(self.geometry.spacing, &self.geometry.extents)?;
        match &self.omega {
            None => Ok(g),
            Some(shape) => {
                let region = shape.rasterize(&g, base)?;
                let mask = (0..g.len()).map(|i| region.contains(i) && !g.on_rim(i)).collect();
                g.with_flexible(mask)
            }
        }
    }

    pub fn experiment_name(&self) -> &'static str {
        match self.experiment {
            Experiment::Flow { .. } => "flow",
            Experiment::HSweep { .. } => "h-sweep",
            Experiment::Certify { .. } => "certify",
            Experiment::ConvexityReport { .. } => "convexity-report",
            Experiment::LevelFunction { .. } => "level-function",
            Experiment::CorollaryIntegral { .. } => "corollary-integral",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
        [kernel]
        type = "fractional"
        s = 0.5
        truncation_radius = 4.0

        [geometry]
        spacing = 1.0
        extents = [32, 32]

        [shape]
        type = "disk"
        center = [0.0, 0.0]
        radius = 6.0
    "#;

    fn with(experiment: &str) -> String {
        format!("{BASE}\n[experiment]\n{experiment}")
    }

    #[test]
    fn flow_defaults() {
        let c = Config::parse(&with("kind = \"flow\"\nh = 1.0\nt_max = 10.0")).unwrap();
        assert_eq!(c.seed, 0);
        assert_eq!(c.experiment, Experiment::Flow { h: 1.0, t_max: 10.0, mode: Mode::Minimal, snapshot_every: 0, require_nested: false });
        match c.kernel {
            KernelConfig::Fractional { q_tol, .. } => assert_eq!(q_tol, 1e-8),
            _ => panic!(),
        }
    }

    #[test]
    fn misspelled_keys_rejected() {
        assert!(Config::parse(&with("kind = \"flow\"\nh = 1.0\ntmax = 10.0")).is_err());
        assert!(Config::parse(&with("kind = \"flow\"\nh = 1.0\nt_max = 10.0\nextra = 1")).is_err());
        let bad_shape = BASE.replace("radius = 6.0", "radius = 6.0\nradus = 2.0");
        assert!(Config::parse(&format!("{bad_shape}\n[experiment]\nkind = \"certify\"")).is_err());
        assert!(Config::parse(&format!("sed = 3\n{}", with("kind = \"certify\""))).is_err());
    }

    #[test]
    fn parameter_checks() {
        assert!(Config::parse(&with("kind = \"flow\"\nh = -1.0\nt_max = 10.0")).is_err());
        assert!(Config::parse(&with("kind = \"h-sweep\"\nh = [1.0]\nt_max = 10.0")).is_err());
        assert!(Config::parse(&with("kind = \"h-sweep\"\nh = [1.0, 2.0, 0.5]\nt_max = 10.0")).is_err());
        assert!(Config::parse(&with("kind = \"h-sweep\"\nh = [1.0, 0.5, 0.25]\nt_max = 10.0")).is_ok());
        assert!(Config::parse(&with("kind = \"convexity-report\"\nlambda_max = 2.0\nfocus = { center = [0.0], radius = 1.0 }")).is_err());
    }

    #[test]
    fn omega_shape_sets_flexible_mask() {
        let text = format!("{}\n[omega]\ntype = \"disk\"\ncenter = [0.0, 0.0]\nradius = 100.0", with("kind = \"certify\""));
        let c = Config::parse(&text).unwrap();
        let g = c.geometry(None).unwrap();
        assert_eq!(g.flexible().iter().filter(|&&f| f).count(), 30 * 30);
    }
}
