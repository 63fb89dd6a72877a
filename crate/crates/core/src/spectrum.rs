//! Resonance spectra I(Δβ⁰) = |Ψ₀₀(L)|², their normalization, peak location,
//! wavelength conversion and comparison.

use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_biphoton_with, DetuneValue, OdeOptions};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::supermodes::SupermodeModel;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Detune sample points (mm⁻¹), strictly ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    points: Vec<f64>,
}

impl SpectrumGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|x| !x.is_finite()) || points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("points must be finite and strictly ascending".into()));
        }
        Ok(SpectrumGrid { points })
    }

    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 3 || !(hi > lo) {
            return Err(Error::InvalidGrid(format!("bad uniform grid [{lo}, {hi}] x {n}")));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let mut pts: Vec<f64> = (0..n).map(|k| lo + step * k as f64).collect();
        pts[n - 1] = hi;
        SpectrumGrid::new(pts)
    }

    /// [−6C, 6C] sampled at 481 points.
    pub fn default_for(mean_coupling: f64) -> Self {
        SpectrumGrid::uniform(-6.0 * mean_coupling, 6.0 * mean_coupling, 481)
            .expect("positive coupling gives a valid grid")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.points[0], self.points[self.points.len() - 1])
    }
}

/// Trapezoidal integral of samples `y` over abscissae `x`.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Vertex of the parabola through three points; falls back to the middle
/// abscissa when the points are collinear.
pub fn parabolic_peak(x: [f64; 3], y: [f64; 3]) -> f64 {
    let [x0, x1, x2] = x;
    let [y0, y1, y2] = y;
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if curvature == 0.0 || !curvature.is_finite() {
        return x1;
    }
    // y = y0 + d01 (x − x0) + curvature (x − x0)(x − x1)
    0.5 * (x0 + x1) - d01 / (2.0 * curvature)
}

/// A unit-area resonance spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub grid: SpectrumGrid,
    pub intensity: Vec<f64>,
    /// Interpolated position of the maximum (mm⁻¹).
    pub peak_detune: f64,
    /// Trapezoidal area before normalization.
    pub raw_scale: f64,
    /// The sampled maximum sits on the first or last grid point.
    pub peak_on_boundary: bool,
}

impl Spectrum {
    /// Normalizes raw intensities to unit trapezoidal area and locates the peak.
    pub fn from_raw(grid: SpectrumGrid, raw: Vec<f64>) -> Result<Self> {
        if raw.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: raw.len(),
            });
        }
        let area = trapezoid(grid.points(), &raw);
        if !(area > 0.0 && area.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "spectrum has non-positive area {area}"
            )));
        }
        let intensity: Vec<f64> = raw.iter().map(|y| (y / area).max(0.0)).collect();

        let imax = intensity
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let x = grid.points();
        let last = x.len() - 1;
        let (peak_detune, peak_on_boundary) = if imax == 0 || imax == last {
            (x[imax], true)
        } else {
            let p = parabolic_peak(
                [x[imax - 1], x[imax], x[imax + 1]],
                [intensity[imax - 1], intensity[imax], intensity[imax + 1]],
            );
            (p.clamp(x[imax - 1], x[imax + 1]), false)
        };

        Ok(Spectrum {
            grid,
            intensity,
            peak_detune,
            raw_scale: area,
            peak_on_boundary,
        })
    }

    pub fn area(&self) -> f64 {
        trapezoid(self.grid.points(), &self.intensity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    #[default]
    ClosedForm,
    Ode,
}

impl std::str::FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "closed_form" | "closed" | "supermode" => Ok(Solver::ClosedForm),
            "ode" | "rk4" => Ok(Solver::Ode),
            other => Err(Error::Config(format!("unknown solver `{other}`"))),
        }
    }
}

/// Raw |Ψ₀₀|² samples over the grid.
pub fn raw_intensity(lat: &Lattice, grid: &SpectrumGrid, solver: Solver) -> Result<Vec<f64>> {
    match solver {
        Solver::ClosedForm => {
            let central = SupermodeModel::new(lat).central_resonance();
            Ok(grid
                .points()
                .iter()
                .map(|&d| central.intensity(DetuneValue(d)))
                .collect())
        }
        Solver::Ode => {
            let opts = OdeOptions::default();
            grid.points()
                .iter()
                .map(|&d| {
                    integrate_biphoton_with(lat, DetuneValue(d), &opts).map(|s| s.central().norm_sqr())
                })
                .collect()
        }
    }
}

pub fn resonance_spectrum(lat: &Lattice, grid: &SpectrumGrid, solver: Solver) -> Result<Spectrum> {
    let raw = raw_intensity(lat, grid, solver)?;
    Spectrum::from_raw(grid.clone(), raw)
}

/// Linear map between detuning and pump wavelength,
/// Δβ⁰ = a (ω_p − ω_p⁽⁰⁾) about λ₀ = 2πc / ω_p⁽⁰⁾.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WavelengthMap {
    /// Dispersion slope a in ps/mm.
    pub a_ps_per_mm: f64,
    pub lambda0_nm: f64,
    pub speed_of_light: f64,
}

impl Default for WavelengthMap {
    fn default() -> Self {
        WavelengthMap {
            a_ps_per_mm: 3.0,
            lambda0_nm: 775.0,
            speed_of_light: SPEED_OF_LIGHT,
        }
    }
}

impl WavelengthMap {
    pub fn validate(&self) -> Result<()> {
        if self.a_ps_per_mm == 0.0 || !self.a_ps_per_mm.is_finite() {
            return Err(Error::Config("dispersion slope a must be non-zero".into()));
        }
        if !(self.lambda0_nm > 0.0) || !(self.speed_of_light > 0.0) {
            return Err(Error::Config("lambda0 and c must be positive".into()));
        }
        Ok(())
    }

    /// nm of wavelength per mm⁻¹ of detuning (negative for a > 0).
    pub fn nm_per_detune(&self) -> f64 {
        let lambda0 = self.lambda0_nm * 1e-9;
        // 1 mm⁻¹ of Δβ⁰ is 1 / (a · 1 ps) rad/s of pump frequency
        let domega = 1.0 / (self.a_ps_per_mm * 1e-12);
        -lambda0 * lambda0 / (2.0 * std::f64::consts::PI * self.speed_of_light) * domega * 1e9
    }
}

/// Wavelength offset from λ₀ (nm) of detuning `d`, linearized about λ₀.
pub fn detune_to_wavelength(d: DetuneValue, map: &WavelengthMap) -> f64 {
    d.0 * map.nm_per_detune()
}

fn same_grid(a: &Spectrum, b: &Spectrum) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Shift of the resonance maximum of `s` relative to `reference`, in nm.
pub fn peak_shift(s: &Spectrum, reference: &Spectrum, map: &WavelengthMap) -> Result<f64> {
    same_grid(s, reference)?;
    Ok(detune_to_wavelength(
        DetuneValue(s.peak_detune - reference.peak_detune),
        map,
    ))
}

/// Bhattacharyya coefficient ∫√(p₁p₂) of two unit-area spectra (trapezoidal).
pub fn spectral_overlap(s1: &Spectrum, s2: &Spectrum) -> Result<f64> {
    same_grid(s1, s2)?;
    let root: Vec<f64> = s1
        .intensity
        .iter()
        .zip(&s2.intensity)
        .map(|(a, b)| (a * b).sqrt())
        .collect();
    Ok(trapezoid(s1.grid.points(), &root).clamp(0.0, 1.0))
}
