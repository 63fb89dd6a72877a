//! Waveguide-array geometries and coupling disorder.
//!
//! Sites are indexed `0..N` with the central (pumped) guide at `N / 2`.
//! Coupling `k` joins sites `k` and `k + 1`. Units are mm and mm⁻¹ throughout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::Tridiagonal;

/// Identifier of the disorder random-stream scheme, echoed in run manifests.
pub const RNG_SCHEME: &str = "chacha8rng(seed_from_u64(splitmix64-fold(master, keys...)))/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Homogeneous,
    TrivialMode,
    Ssh,
}

impl Geometry {
    pub fn label(self) -> &'static str {
        match self {
            Geometry::Homogeneous => "homogeneous",
            Geometry::TrivialMode => "trivial_mode",
            Geometry::Ssh => "ssh",
        }
    }
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "homogeneous" | "hom" => Ok(Geometry::Homogeneous),
            "trivial_mode" | "trivial" => Ok(Geometry::TrivialMode),
            "ssh" | "topological" => Ok(Geometry::Ssh),
            other => Err(Error::Config(format!("unknown geometry `{other}`"))),
        }
    }
}

/// Which light field a coupling matrix describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    /// Signal and idler photons.
    Spdc,
    Pump,
}

/// Nominal array parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub geometry: Geometry,
    /// Number of guides, odd.
    pub n_guides: usize,
    /// Mean SPDC coupling C (mm⁻¹).
    pub mean_coupling: f64,
    /// SSH dimerization K; ignored by the other geometries.
    pub dimerization: f64,
    /// Propagation-constant shift δ of the central guide (mm⁻¹); trivial-mode only.
    pub defect_detune: f64,
    /// Pump coupling ratio α = C_p / C.
    pub pump_ratio: f64,
    /// Array length L (mm).
    pub length: f64,
    /// SPDC amplitude gain γ (mm⁻¹).
    pub spdc_gain: f64,
}

impl LatticeSpec {
    /// Reference arrays: 13 guides, L = 2 mm,
    /// C = 2.5 mm⁻¹, α = 0.2, K = 0.5 and δ = 2C where applicable.
    pub fn reference(geometry: Geometry) -> Self {
        let mean_coupling = 2.5;
        LatticeSpec {
            geometry,
            n_guides: 13,
            mean_coupling,
            dimerization: if geometry == Geometry::Ssh { 0.5 } else { 0.0 },
            defect_detune: if geometry == Geometry::TrivialMode {
                2.0 * mean_coupling
            } else {
                0.0
            },
            pump_ratio: 0.2,
            length: 2.0,
            spdc_gain: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidLattice(msg));
        if self.n_guides == 0 || self.n_guides.is_multiple_of(2) {
            return bad(format!(
                "n_guides must be odd and positive, got {}",
                self.n_guides
            ));
        }
        if !(self.mean_coupling > 0.0 && self.mean_coupling.is_finite()) {
            return bad(format!("mean_coupling must be > 0, got {}", self.mean_coupling));
        }
        if self.geometry == Geometry::Ssh && !(0.0..1.0).contains(&self.dimerization) {
            return bad(format!("dimerization must lie in [0, 1), got {}", self.dimerization));
        }
        if !(self.pump_ratio > 0.0 && self.pump_ratio.is_finite()) {
            return bad(format!("pump_ratio must be > 0, got {}", self.pump_ratio));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return bad(format!("length must be > 0, got {}", self.length));
        }
        if !self.spdc_gain.is_finite() || !self.defect_detune.is_finite() {
            return bad("spdc_gain and defect_detune must be finite".into());
        }
        Ok(())
    }

    /// Non-fatal remarks about the parameter choice.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.geometry == Geometry::Ssh && self.dimerization == 0.0 {
            out.push("SSH lattice with K = 0 is identical to the homogeneous array".to_string());
        }
        if self.geometry == Geometry::TrivialMode && self.defect_detune == 0.0 {
            out.push("trivial-mode lattice with zero defect detuning is homogeneous".to_string());
        }
        out
    }

    pub fn central_index(&self) -> usize {
        self.n_guides / 2
    }
}

/// A concrete array realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub geometry: Geometry,
    pub couplings_spdc: Vec<f64>,
    pub couplings_pump: Vec<f64>,
    /// Diagonal propagation-constant shift per guide, shared by pump and SPDC.
    pub detunings: Vec<f64>,
    pub pump_ratio: f64,
    pub length: f64,
    pub spdc_gain: f64,
}

impl Lattice {
    pub fn n_guides(&self) -> usize {
        self.detunings.len()
    }

    pub fn central_index(&self) -> usize {
        self.n_guides() / 2
    }

    /// Coupling matrix of `field`: detunings on the diagonal, that field's
    /// couplings off the diagonal.
    pub fn hamiltonian(&self, field: Field) -> Tridiagonal {
        let off = match field {
            Field::Spdc => self.couplings_spdc.clone(),
            Field::Pump => self.couplings_pump.clone(),
        };
        Tridiagonal::new(self.detunings.clone(), off)
    }

    /// Largest coupling of either field.
    pub fn max_coupling(&self) -> f64 {
        self.couplings_spdc
            .iter()
            .chain(&self.couplings_pump)
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Builds a lattice from explicit SPDC couplings and detunings; pump
    /// couplings follow as `pump_ratio × couplings`.
    pub fn from_parts(
        geometry: Geometry,
        couplings_spdc: Vec<f64>,
        detunings: Vec<f64>,
        pump_ratio: f64,
        length: f64,
        spdc_gain: f64,
    ) -> Result<Self> {
        if detunings.is_empty() || couplings_spdc.len() + 1 != detunings.len() {
            return Err(Error::InvalidLattice(format!(
                "{} couplings do not fit {} guides",
                couplings_spdc.len(),
                detunings.len()
            )));
        }
        if couplings_spdc.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidLattice("couplings must be positive".into()));
        }
        let couplings_pump = couplings_spdc.iter().map(|c| pump_ratio * c).collect();
        Ok(Lattice {
            geometry,
            couplings_spdc,
            couplings_pump,
            detunings,
            pump_ratio,
            length,
            spdc_gain,
        })
    }
}

/// Builds the disorder-free lattice for `spec`.
///
/// SSH arrays place the weak coupling C(1−K) on both bonds of the central
/// guide and alternate strong/weak moving outward, so the chain is mirror
/// symmetric about the center. Trivial-mode arrays carry δ on the central
/// guide's diagonal.
pub fn build_lattice(spec: &LatticeSpec) -> Result<Lattice> {
    spec.validate()?;
    let n = spec.n_guides;
    let center = n / 2;
    let c = spec.mean_coupling;

    let couplings: Vec<f64> = match spec.geometry {
        Geometry::Homogeneous | Geometry::TrivialMode => vec![c; n - 1],
        Geometry::Ssh => (0..n - 1)
            .map(|k| {
                // bond distance from the central guide: 0 for its own bonds
                let dist = if k < center { center - 1 - k } else { k - center };
                if dist % 2 == 0 {
                    c * (1.0 - spec.dimerization)
                } else {
                    c * (1.0 + spec.dimerization)
                }
            })
            .collect(),
    };

    let mut detunings = vec![0.0; n];
    if spec.geometry == Geometry::TrivialMode {
        detunings[center] = spec.defect_detune;
    }

    Lattice::from_parts(
        spec.geometry,
        couplings,
        detunings,
        spec.pump_ratio,
        spec.length,
        spec.spdc_gain,
    )
}

/// One draw of multiplicative coupling disorder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    /// Relative amplitude Δ; each coupling becomes nominal·(1+u), u ~ U[−Δ, Δ].
    pub strength: f64,
    pub master_seed: u64,
    pub realization_index: u64,
    /// Experimental on-site disorder amplitude (mm⁻¹), uniform in [−w, w].
    /// Zero in every standard pipeline.
    #[serde(default)]
    pub diagonal_strength: f64,
}

impl DisorderSpec {
    pub fn new(strength: f64, master_seed: u64, realization_index: u64) -> Self {
        DisorderSpec {
            strength,
            master_seed,
            realization_index,
            diagonal_strength: 0.0,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Folds a master seed and a key path into a 64-bit substream seed.
pub fn mix_seed(master: u64, keys: &[u64]) -> u64 {
    keys.iter()
        .fold(splitmix64(master), |h, &k| splitmix64(h ^ splitmix64(k)))
}

/// Deterministic generator for the keyed substream.
pub fn substream(master: u64, keys: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(master, keys))
}

/// Applies seeded multiplicative disorder to the SPDC couplings and re-derives
/// the pump couplings. Draws are consumed in ascending coupling index from the
/// substream keyed by `(master_seed, realization_index)`.
pub fn apply_disorder(lat: &Lattice, dis: &DisorderSpec) -> Result<Lattice> {
    if !(0.0..1.0).contains(&dis.strength) {
        return Err(Error::InvalidDisorder(dis.strength));
    }
    if !(dis.diagonal_strength >= 0.0 && dis.diagonal_strength.is_finite()) {
        return Err(Error::InvalidLattice(format!(
            "diagonal disorder must be >= 0, got {}",
            dis.diagonal_strength
        )));
    }
    let mut rng = substream(dis.master_seed, &[dis.realization_index]);
    let mut symmetric = |w: f64| w * (2.0 * rng.gen::<f64>() - 1.0);

    let couplings: Vec<f64> = lat
        .couplings_spdc
        .iter()
        .map(|&c| c * (1.0 + symmetric(dis.strength)))
        .collect();

    let mut detunings = lat.detunings.clone();
    if dis.diagonal_strength > 0.0 {
        for d in &mut detunings {
            *d += symmetric(dis.diagonal_strength);
        }
    }

    Lattice::from_parts(
        lat.geometry,
        couplings,
        detunings,
        lat.pump_ratio,
        lat.length,
        lat.spdc_gain,
    )
}
