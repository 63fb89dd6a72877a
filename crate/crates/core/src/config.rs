//! Run configuration: a TOML file with fixed sections, plus command-line
//! overrides. Unknown keys are rejected.
//!
//! ```toml
//! [lattice]
//! geometry = "ssh"          # homogeneous | trivial_mode | ssh
//! n_guides = 13
//! mean_coupling = 2.5       # mm⁻¹
//! dimerization = 0.5        # SSH only
//! # defect_detune = 5.0     # trivial_mode only, default 2 × mean_coupling
//! pump_ratio = 0.2
//! length = 2.0              # mm
//! spdc_gain = 1.0
//!
//! [disorder]
//! strengths = [0.0, 0.1, 0.2, 0.3, 0.4]
//! realizations = 300
//! diagonal_strength = 0.0   # experimental on-site disorder, mm⁻¹
//!
//! [grid]
//! # min = -15.0             # default -6 × mean_coupling
//! # max = 15.0              # default +6 × mean_coupling
//! points = 481
//!
//! [wavelength]
//! a_ps_per_mm = 3.0
//! lambda0_nm = 775.0
//!
//! [compare]
//! geometries = ["homogeneous", "trivial_mode", "ssh"]
//!
//! [run]
//! seed = 2024
//! threads = 0               # 0 = all cores
//! solver = "closed_form"    # closed_form | ode
//! output_dir = "out"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Geometry, LatticeSpec};
use crate::spectrum::{Solver, SpectrumGrid, WavelengthMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    #[serde(default = "default_geometry")]
    pub geometry: Geometry,
    #[serde(default = "default_n_guides")]
    pub n_guides: usize,
    #[serde(default = "default_coupling")]
    pub mean_coupling: f64,
    #[serde(default)]
    pub dimerization: Option<f64>,
    #[serde(default)]
    pub defect_detune: Option<f64>,
    #[serde(default = "default_pump_ratio")]
    pub pump_ratio: f64,
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(default = "default_gain")]
    pub spdc_gain: f64,
}

fn default_geometry() -> Geometry {
    Geometry::Ssh
}
fn default_n_guides() -> usize {
    13
}
fn default_coupling() -> f64 {
    2.5
}
fn default_pump_ratio() -> f64 {
    0.2
}
fn default_length() -> f64 {
    2.0
}
fn default_gain() -> f64 {
    1.0
}

impl Default for LatticeSection {
    fn default() -> Self {
        LatticeSection {
            geometry: default_geometry(),
            n_guides: default_n_guides(),
            mean_coupling: default_coupling(),
            dimerization: None,
            defect_detune: None,
            pump_ratio: default_pump_ratio(),
            length: default_length(),
            spdc_gain: default_gain(),
        }
    }
}

impl LatticeSection {
    /// Lattice spec for `geometry` sharing every other parameter. Unset K
    /// defaults to 0.5 and unset δ to 2C.
    pub fn spec_for(&self, geometry: Geometry) -> LatticeSpec {
        LatticeSpec {
            geometry,
            n_guides: self.n_guides,
            mean_coupling: self.mean_coupling,
            dimerization: match geometry {
                Geometry::Ssh => self.dimerization.unwrap_or(0.5),
                _ => 0.0,
            },
            defect_detune: match geometry {
                Geometry::TrivialMode => self.defect_detune.unwrap_or(2.0 * self.mean_coupling),
                _ => 0.0,
            },
            pump_ratio: self.pump_ratio,
            length: self.length,
            spdc_gain: self.spdc_gain,
        }
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec_for(self.geometry)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderSection {
    #[serde(default = "default_strengths")]
    pub strengths: Vec<f64>,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default)]
    pub diagonal_strength: f64,
}

fn default_strengths() -> Vec<f64> {
    vec![0.0]
}
fn default_realizations() -> usize {
    crate::ensemble::DEFAULT_REALIZATIONS
}

impl Default for DisorderSection {
    fn default() -> Self {
        DisorderSection {
            strengths: default_strengths(),
            realizations: default_realizations(),
            diagonal_strength: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    481
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            min: None,
            max: None,
            points: default_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSection {
    #[serde(default = "default_geometries")]
    pub geometries: Vec<Geometry>,
}

fn default_geometries() -> Vec<Geometry> {
    vec![Geometry::Homogeneous, Geometry::TrivialMode, Geometry::Ssh]
}

impl Default for CompareSection {
    fn default() -> Self {
        CompareSection {
            geometries: default_geometries(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub solver: Solver,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
}

fn default_seed() -> u64 {
    2024
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            seed: default_seed(),
            threads: 0,
            solver: Solver::ClosedForm,
            output_dir: default_out(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub lattice: LatticeSection,
    #[serde(default)]
    pub disorder: DisorderSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub wavelength: WavelengthMap,
    #[serde(default)]
    pub compare: CompareSection,
    #[serde(default)]
    pub run: RunSection,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub solver: Option<Solver>,
}

#[derive(Deserialize)]
struct ManifestConfig {
    config: RunConfig,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a TOML config, or the config echo of a `manifest.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            let m: ManifestConfig =
                serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            m.config.validate()?;
            return Ok(m.config);
        }
        Self::from_toml_str(&text)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(s) = o.seed {
            self.run.seed = s;
        }
        if let Some(t) = o.threads {
            self.run.threads = t;
        }
        if let Some(dir) = &o.output_dir {
            self.run.output_dir = dir.clone();
        }
        if let Some(s) = o.solver {
            self.run.solver = s;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.lattice.spec();
        spec.validate().map_err(|e| Error::Config(e.to_string()))?;
        for &g in &self.compare.geometries {
            self.lattice
                .spec_for(g)
                .validate()
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        let s = &self.disorder.strengths;
        if s.is_empty() {
            return Err(Error::Config("disorder.strengths must not be empty".into()));
        }
        if let Some(bad) = s.iter().find(|d| !(0.0..1.0).contains(*d)) {
            return Err(Error::Config(format!("disorder strength {bad} outside [0, 1)")));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("disorder.strengths must be strictly ascending".into()));
        }
        if !(self.disorder.diagonal_strength >= 0.0) {
            return Err(Error::Config("disorder.diagonal_strength must be >= 0".into()));
        }
        self.grid()?;
        self.wavelength.validate()?;
        Ok(())
    }

    pub fn grid(&self) -> Result<SpectrumGrid> {
        let c = self.lattice.mean_coupling;
        let lo = self.grid.min.unwrap_or(-6.0 * c);
        let hi = self.grid.max.unwrap_or(6.0 * c);
        SpectrumGrid::uniform(lo, hi, self.grid.points).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}
