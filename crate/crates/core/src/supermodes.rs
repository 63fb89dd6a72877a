//! Supermode analysis and the exact closed-form biphoton solver.
//!
//! In the eigenbasis of the SPDC coupling matrix `H_s = V diag(μ) Vᵀ` and the
//! pump matrix `H_p = W diag(ν) Wᵀ`, every pump supermode `q` drives the signal
//! and idler pair `(m_s, m_i)` with strength
//! `W[center, q] · Γ[q][m_s][m_i]`, where `Γ[q][a][b] = Σ_n W[n,q] V[n,a] V[n,b]`.
//! Integrating the driven linear system over `[0, L]` gives
//!
//! ```text
//! Ψ̂_ab(L) = γL Σ_q W[c,q] Γ[q][a][b] e^{i(μ_a+μ_b)L} e^{iθL/2} sinc(θL/2),
//! θ = ν_q − Δβ⁰ − μ_a − μ_b,
//! ```
//!
//! and `Ψ = V Ψ̂ Vᵀ`. This is exact for the equations integrated in
//! [`crate::dynamics`].

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{BiphotonState, DetuneValue};
use crate::error::{Error, Result};
use crate::lattice::{Field, Geometry, Lattice};

/// Eigenpairs of one field's coupling matrix, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SupermodeBasis {
    pub field: Field,
    pub eigenvalues: Vec<f64>,
    /// Columns are orthonormal supermodes; each column's largest-magnitude
    /// entry is positive.
    pub eigenvectors: DMatrix<f64>,
}

impl SupermodeBasis {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn mode(&self, m: usize) -> Vec<f64> {
        self.eigenvectors.column(m).iter().copied().collect()
    }
}

/// Full spectrum of the real symmetric tridiagonal matrix of `field`.
pub fn eigendecompose(lat: &Lattice, field: Field) -> SupermodeBasis {
    let h = lat.hamiltonian(field).to_dense();
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let mut vectors = DMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let col = eig.eigenvectors.column(src);
        let max = col.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let pivot = col
            .iter()
            .position(|x| x.abs() >= max * (1.0 - 1e-12))
            .unwrap_or(0);
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.set_column(dst, &(col * sign));
    }
    SupermodeBasis {
        field,
        eigenvalues: values,
        eigenvectors: vectors,
    }
}

/// Three-mode overlap Γ[q][m_s][m_i] and the pump injection weights.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapTensor {
    n: usize,
    gamma: Vec<f64>,
    /// Projection of central-guide injection onto each pump supermode.
    pub pump_weights: Vec<f64>,
}

impl OverlapTensor {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, q: usize, ms: usize, mi: usize) -> f64 {
        self.gamma[(q * self.n + ms) * self.n + mi]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gamma
    }
}

pub fn overlap_tensor(basis_pump: &SupermodeBasis, basis_spdc: &SupermodeBasis) -> Result<OverlapTensor> {
    let n = basis_spdc.dim();
    if basis_pump.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: basis_pump.dim(),
        });
    }
    let w = &basis_pump.eigenvectors;
    let v = &basis_spdc.eigenvectors;
    let mut gamma = vec![0.0; n * n * n];
    for q in 0..n {
        for a in 0..n {
            for b in a..n {
                let g: f64 = (0..n).map(|s| w[(s, q)] * v[(s, a)] * v[(s, b)]).sum();
                gamma[(q * n + a) * n + b] = g;
                gamma[(q * n + b) * n + a] = g;
            }
        }
    }
    let center = n / 2;
    Ok(OverlapTensor {
        n,
        gamma,
        pump_weights: (0..n).map(|q| w[(center, q)]).collect(),
    })
}

/// `L e^{ix} sinc(x)` with `x = θL/2`: the integral of `e^{iθz}` over `[0, L]`.
#[inline]
fn phase_integral(theta: f64, length: f64) -> Complex64 {
    let x = 0.5 * theta * length;
    let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
    Complex64::from_polar(length * sinc, x)
}

/// Per-lattice supermode data, reusable across any number of detunings.
#[derive(Debug, Clone)]
pub struct SupermodeModel {
    pub spdc: SupermodeBasis,
    pub pump: SupermodeBasis,
    pub overlap: OverlapTensor,
    length: f64,
    gain: f64,
}

impl SupermodeModel {
    pub fn new(lat: &Lattice) -> Self {
        let spdc = eigendecompose(lat, Field::Spdc);
        let pump = eigendecompose(lat, Field::Pump);
        let overlap = overlap_tensor(&pump, &spdc).expect("bases built from one lattice");
        SupermodeModel {
            spdc,
            pump,
            overlap,
            length: lat.length,
            gain: lat.spdc_gain,
        }
    }

    /// Ψ in the supermode basis, Ψ̂[m_s, m_i].
    pub fn supermode_amplitudes(&self, d: DetuneValue) -> DMatrix<Complex64> {
        let n = self.spdc.dim();
        let mu = &self.spdc.eigenvalues;
        let nu = &self.pump.eigenvalues;
        let l = self.length;
        let mut out = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for q in 0..n {
                    let theta = nu[q] - d.0 - mu[a] - mu[b];
                    acc += phase_integral(theta, l)
                        * (self.overlap.pump_weights[q] * self.overlap.get(q, a, b));
                }
                let v = acc * Complex64::from_polar(self.gain, (mu[a] + mu[b]) * l);
                out[(a, b)] = v;
                out[(b, a)] = v;
            }
        }
        out
    }

    pub fn biphoton(&self, d: DetuneValue) -> BiphotonState {
        let v = self.spdc.eigenvectors.map(Complex64::from);
        let hat = self.supermode_amplitudes(d);
        BiphotonState {
            psi: &v * hat * v.transpose(),
            z: self.length,
        }
    }

    /// Precomputed expansion of Ψ₀₀ alone, for dense detune scans.
    pub fn central_resonance(&self) -> CentralResonance {
        let n = self.spdc.dim();
        let c = n / 2;
        let mu = &self.spdc.eigenvalues;
        let nu = &self.pump.eigenvalues;
        let v = &self.spdc.eigenvectors;
        let l = self.length;

        let mut terms = Vec::with_capacity(n * n * (n + 1) / 2);
        for q in 0..n {
            let wq = self.overlap.pump_weights[q];
            for a in 0..n {
                for b in a..n {
                    let mult = if a == b { 1.0 } else { 2.0 };
                    let weight = mult * wq * self.overlap.get(q, a, b) * v[(c, a)] * v[(c, b)];
                    let omega = nu[q] - mu[a] - mu[b];
                    let coef = Complex64::from_polar(weight, (mu[a] + mu[b]) * l);
                    terms.push(ResonanceTerm {
                        coef,
                        omega,
                        rotation: Complex64::from_polar(1.0, omega * l),
                    });
                }
            }
        }
        let scale = terms.iter().map(|t| t.coef.norm()).fold(0.0, f64::max);
        terms.retain(|t| t.coef.norm() > 1e-16 * scale);
        CentralResonance {
            terms,
            length: l,
            gain: self.gain,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct ResonanceTerm {
    coef: Complex64,
    omega: f64,
    rotation: Complex64,
}

/// Ψ₀₀(Δβ⁰) = γ Σ_j c_j ∫₀ᴸ e^{i(Ω_j − Δβ⁰) z} dz over the contributing
/// supermode triples j = (q, m_s, m_i), Ω_j = ν_q − μ_{m_s} − μ_{m_i}.
#[derive(Debug, Clone)]
pub struct CentralResonance {
    terms: Vec<ResonanceTerm>,
    length: f64,
    gain: f64,
}

impl CentralResonance {
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Resonance positions Δβ⁰ = Ω_j of all contributing processes.
    pub fn resonances(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.omega)
    }

    pub fn amplitude(&self, d: DetuneValue) -> Complex64 {
        let l = self.length;
        let back = Complex64::from_polar(1.0, -d.0 * l);
        let one = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let theta = t.omega - d.0;
            let integral = if (theta * l).abs() < 0.2 {
                phase_integral(theta, l)
            } else {
                // (e^{iθL} − 1) / (iθ)
                let num = t.rotation * back - one;
                Complex64::new(num.im / theta, -num.re / theta)
            };
            acc += t.coef * integral;
        }
        acc * self.gain
    }

    pub fn intensity(&self, d: DetuneValue) -> f64 {
        self.amplitude(d).norm_sqr()
    }
}

/// Closed-form Ψ(L) for a single detuning.
pub fn closed_form_biphoton(lat: &Lattice, d: DetuneValue) -> BiphotonState {
    SupermodeModel::new(lat).biphoton(d)
}

/// Per-mode localization figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeStats {
    pub index: usize,
    pub eigenvalue: f64,
    /// 1 / Σ v⁴.
    pub participation_ratio: f64,
    /// |v(center)|².
    pub central_weight: f64,
    /// Σ |v_n|² over sites an odd number of steps from the center.
    pub odd_sublattice_weight: f64,
}

pub fn mode_stats(basis: &SupermodeBasis, m: usize) -> ModeStats {
    let n = basis.dim();
    let c = n / 2;
    let col = basis.eigenvectors.column(m);
    let p4: f64 = col.iter().map(|x| x.powi(4)).sum();
    let odd: f64 = col
        .iter()
        .enumerate()
        .filter(|(s, _)| s.abs_diff(c) % 2 == 1)
        .map(|(_, x)| x * x)
        .sum();
    ModeStats {
        index: m,
        eigenvalue: basis.eigenvalues[m],
        participation_ratio: 1.0 / p4,
        central_weight: col[c] * col[c],
        odd_sublattice_weight: odd,
    }
}

pub fn mode_table(basis: &SupermodeBasis) -> Vec<ModeStats> {
    (0..basis.dim()).map(|m| mode_stats(basis, m)).collect()
}

/// Diagnostics of the mode localized on the central guide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeDiagnostics {
    pub mode_index: usize,
    /// Eigenvalue of the identified mode (mm⁻¹).
    pub zero_mode_eigenvalue: f64,
    /// Geometric mean of |v(c±2)| / |v(c)|; `None` for fewer than five guides.
    pub localization_ratio: Option<f64>,
    pub participation_ratio: f64,
    pub central_overlap: f64,
    pub odd_sublattice_weight: f64,
    /// Distance from the identified eigenvalue to the nearest other one;
    /// `None` for a single guide.
    pub gap: Option<f64>,
}

/// Index of the central localized mode.
///
/// Homogeneous and SSH arrays: the eigenvalue closest to zero, preferring
/// modes whose odd-sublattice weight is below 1e-6. Trivial-mode arrays: the
/// mode with the largest central weight (the defect state pushed out of the
/// band by δ).
pub fn localized_mode(basis: &SupermodeBasis, geometry: Geometry) -> usize {
    let stats = mode_table(basis);
    let by_abs = |a: &&ModeStats, b: &&ModeStats| a.eigenvalue.abs().total_cmp(&b.eigenvalue.abs());
    match geometry {
        Geometry::TrivialMode => stats
            .iter()
            .max_by(|a, b| a.central_weight.total_cmp(&b.central_weight))
            .map(|s| s.index)
            .unwrap_or(0),
        Geometry::Homogeneous | Geometry::Ssh => stats
            .iter()
            .filter(|s| s.odd_sublattice_weight < 1e-6)
            .min_by(by_abs)
            .or_else(|| stats.iter().min_by(by_abs))
            .map(|s| s.index)
            .unwrap_or(0),
    }
}

pub fn mode_diagnostics(basis: &SupermodeBasis, lat: &Lattice) -> ModeDiagnostics {
    let m = localized_mode(basis, lat.geometry);
    let stats = mode_stats(basis, m);
    let n = basis.dim();
    let c = n / 2;
    let col = basis.eigenvectors.column(m);

    let localization_ratio = (n >= 5 && col[c] != 0.0).then(|| {
        let right = (col[c + 2] / col[c]).abs();
        let left = (col[c - 2] / col[c]).abs();
        (right * left).sqrt()
    });

    let lambda = basis.eigenvalues[m];
    let gap = basis
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != m)
        .map(|(_, &e)| (e - lambda).abs())
        .reduce(f64::min);

    ModeDiagnostics {
        mode_index: m,
        zero_mode_eigenvalue: lambda,
        localization_ratio,
        participation_ratio: stats.participation_ratio,
        central_overlap: stats.central_weight,
        odd_sublattice_weight: stats.odd_sublattice_weight,
        gap,
    }
}

/// Smallest |eigenvalue| among all modes except `excluded`.
pub fn bulk_gap(basis: &SupermodeBasis, excluded: usize) -> Option<f64> {
    basis
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != excluded)
        .map(|(_, e)| e.abs())
        .reduce(f64::min)
}
