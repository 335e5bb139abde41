//! Experiment configuration (TOML, schema version 1).
//!
//! Every table and key is optional; an empty file reproduces the default
//! cascaded setup (`zeta = 5`, `l_c = 1`, `l_f = 5`). Unknown keys are
//! rejected.
//!
//! ```toml
//! schema_version = 1
//! model = "both"                 # scattering | coupled | both
//!
//! [geometry]
//! layout = "cascaded"            # cascaded | single
//! zeta = 5.0
//! l_c = 1.0
//! l_f = 5.0
//! n_c = 10                       # or target_omega = 31.2
//! fiber = "resonant"             # resonant | exact
//! coupling = "geometric_mean"    # geometric_mean | arithmetic_mean
//!
//! [sweep]
//! parameter = "omega"
//! points = 4001
//! min = 31.0                     # optional, defaults to a window around omega_c
//! max = 31.4
//! normalized = false             # min/max in units of omega_c
//!
//! [drive]
//! a_in = 1.0
//! d_in = 0.0
//! d_phase = 0.0                  # D = d_in * exp(-i d_phase)
//!
//! [coupled]                      # overrides of matched coupled-model values
//! g = 0.0
//!
//! [delta]
//! zetas = [3.0, 5.0, 8.0, 12.0, 20.0]
//!
//! [phase]
//! points = 181                   # phi grid over [-pi, pi]
//! omega_points = 401             # frequency grid of the phase scan
//!
//! [output]
//! dir = "out"
//! svg = false
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{CouplingRule, FiberLength};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub model: ModelSelection,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub drive: DriveConfig,
    #[serde(default)]
    pub coupled: CoupledOverrides,
    #[serde(default)]
    pub delta: DeltaConfig,
    #[serde(default)]
    pub phase: PhaseConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            model: ModelSelection::default(),
            geometry: GeometryConfig::default(),
            sweep: SweepConfig::default(),
            drive: DriveConfig::default(),
            coupled: CoupledOverrides::default(),
            delta: DeltaConfig::default(),
            phase: PhaseConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSelection {
    Scattering,
    Coupled,
    #[default]
    Both,
}

impl ModelSelection {
    pub fn scattering(self) -> bool {
        matches!(self, ModelSelection::Scattering | ModelSelection::Both)
    }

    pub fn coupled(self) -> bool {
        matches!(self, ModelSelection::Coupled | ModelSelection::Both)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// Cavity, fiber, cavity: four mirrors.
    #[default]
    Cascaded,
    /// One two-mirror cavity; the coupled model has no fiber.
    Single,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    #[serde(default)]
    pub layout: Layout,
    #[serde(default = "default_zeta")]
    pub zeta: f64,
    #[serde(default = "one")]
    pub l_c: f64,
    #[serde(default = "default_l_f")]
    pub l_f: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_c: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_f: Option<u32>,
    /// Selects `n_c` as the order nearest to this frequency when `n_c` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_omega: Option<f64>,
    #[serde(default)]
    pub fiber: FiberLength,
    #[serde(default)]
    pub coupling: CouplingRule,
}

fn default_zeta() -> f64 {
    5.0
}

fn default_l_f() -> f64 {
    5.0
}

fn one() -> f64 {
    1.0
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            layout: Layout::default(),
            zeta: default_zeta(),
            l_c: 1.0,
            l_f: default_l_f(),
            n_c: None,
            n_f: None,
            target_omega: None,
            fiber: FiberLength::default(),
            coupling: CouplingRule::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    #[default]
    Omega,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub parameter: SweepParameter,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub normalized: bool,
}

fn default_points() -> usize {
    crate::spectra::DEFAULT_GRID_POINTS
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            parameter: SweepParameter::Omega,
            min: None,
            max: None,
            points: default_points(),
            normalized: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    #[serde(default = "one")]
    pub a_in: f64,
    #[serde(default)]
    pub d_in: f64,
    #[serde(default)]
    pub d_phase: f64,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            a_in: 1.0,
            d_in: 0.0,
            d_phase: 0.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupledOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaConfig {
    #[serde(default = "default_zetas")]
    pub zetas: Vec<f64>,
}

fn default_zetas() -> Vec<f64> {
    vec![3.0, 5.0, 8.0, 12.0, 20.0]
}

impl Default for DeltaConfig {
    fn default() -> Self {
        Self {
            zetas: default_zetas(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    #[serde(default = "default_phase_points")]
    pub points: usize,
    /// Frequency samples of the phase scan.
    #[serde(default = "default_phase_omega_points")]
    pub omega_points: usize,
}

fn default_phase_omega_points() -> usize {
    401
}

fn default_phase_points() -> usize {
    181
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self {
            points: default_phase_points(),
            omega_points: default_phase_omega_points(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub svg: bool,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_owned()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        fn bad(msg: String) -> Result<()> {
            Err(Error::Config(msg))
        }
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let g = &self.geometry;
        if !(g.zeta.is_finite() && g.zeta > 0.0) {
            return bad(format!("geometry.zeta must be positive, got {}", g.zeta));
        }
        for (key, v) in [("geometry.l_c", g.l_c), ("geometry.l_f", g.l_f)] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{key} must be positive, got {v}"));
            }
        }
        if g.n_c == Some(0) || g.n_f == Some(0) {
            return bad("resonance orders start at 1".into());
        }
        if let Some(t) = g.target_omega {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("geometry.target_omega must be positive, got {t}"));
            }
        }
        let s = &self.sweep;
        if s.points < 3 {
            return bad(format!("sweep.points must be at least 3, got {}", s.points));
        }
        match (s.min, s.max) {
            (Some(lo), Some(hi)) => {
                if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
                    return bad(format!("sweep range [{lo}, {hi}] must be positive and increasing"));
                }
            }
            (None, None) => {}
            _ => return bad("sweep.min and sweep.max must be given together".into()),
        }
        let d = &self.drive;
        for (key, v) in [("drive.a_in", d.a_in), ("drive.d_in", d.d_in)] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{key} must be a non-negative magnitude, got {v}"));
            }
        }
        if !d.d_phase.is_finite() {
            return bad("drive.d_phase must be finite".into());
        }
        let c = &self.coupled;
        for (key, v) in [
            ("coupled.g", c.g),
            ("coupled.eta_l", c.eta_l),
            ("coupled.eta_r", c.eta_r),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v >= 0.0) {
                    return bad(format!("{key} must be non-negative, got {v}"));
                }
            }
        }
        if let Some(k) = c.kappa {
            if !(k.is_finite() && k > 0.0) {
                return bad(format!("coupled.kappa must be positive, got {k}"));
            }
        }
        for (key, v) in [("coupled.omega_f", c.omega_f), ("coupled.phi", c.phi)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return bad(format!("{key} must be finite"));
                }
            }
        }
        if self.delta.zetas.is_empty() {
            return bad("delta.zetas must not be empty".into());
        }
        if let Some(z) = self.delta.zetas.iter().find(|z| !(z.is_finite() && **z > 0.0)) {
            return bad(format!("delta.zetas entries must be positive, got {z}"));
        }
        if self.phase.points < 5 {
            return bad(format!("phase.points must be at least 5, got {}", self.phase.points));
        }
        if self.phase.omega_points < 3 {
            return bad(format!(
                "phase.omega_points must be at least 3, got {}",
                self.phase.omega_points
            ));
        }
        Ok(())
    }
}
