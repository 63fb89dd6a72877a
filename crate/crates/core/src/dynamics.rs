//! Reference solver: fixed-step RK4 integration of the pump and biphoton
//! coupled-mode equations along z.
//!
//! Convention (used everywhere in this crate):
//!
//! ```text
//! dA/dz = i H_p A
//! dΨ/dz = i (H_s Ψ + Ψ H_s) + γ diag(A_n(z) e^{-i Δβ⁰ z})
//! ```
//!
//! with `A(0) = e_center` and `Ψ(0) = 0`. Detunings sit on the diagonal of
//! both `H_p` and `H_s`, so a guide shifted by δ resonates at Δβ⁰ = −δ.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Field, Lattice};
use crate::tridiag::Tridiagonal;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-waveguide phase mismatch Δβ⁰ (mm⁻¹), the spectral variable.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DetuneValue(pub f64);

impl DetuneValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for DetuneValue {
    fn from(v: f64) -> Self {
        DetuneValue(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PumpField {
    pub amplitudes: DVector<Complex64>,
    pub z: f64,
}

impl PumpField {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Biphoton amplitude Ψ[n_s, n_i] at position `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonState {
    pub psi: DMatrix<Complex64>,
    pub z: f64,
}

impl BiphotonState {
    /// Ψ at the central guide for both photons.
    pub fn central(&self) -> Complex64 {
        let c = self.psi.nrows() / 2;
        self.psi[(c, c)]
    }

    pub fn max_abs(&self) -> f64 {
        self.psi.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `other`, relative to the largest
    /// entry of `self`.
    pub fn relative_deviation(&self, other: &BiphotonState) -> f64 {
        let scale = self.max_abs();
        let diff = self
            .psi
            .iter()
            .zip(other.psi.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

/// Step control for the RK4 integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeOptions {
    /// Fixed step count over the full length; `None` uses [`default_steps`].
    pub steps: Option<usize>,
    /// If set, the integration is repeated with twice the steps and the
    /// change in |Ψ₀₀|, relative to γL, must stay below this value.
    pub convergence_tol: Option<f64>,
    /// Allowed pump norm drift at z = L.
    pub norm_tol: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            steps: None,
            convergence_tol: Some(1e-6),
            norm_tol: 1e-9,
        }
    }
}

impl OdeOptions {
    pub fn unchecked() -> Self {
        OdeOptions {
            convergence_tol: None,
            ..Default::default()
        }
    }

    pub fn with_steps(steps: usize) -> Self {
        OdeOptions {
            steps: Some(steps),
            ..Self::unchecked()
        }
    }
}

/// Default step count over `[0, L]`.
///
/// Keeps the phase advance per step at most 1/40 rad for the fastest rate in
/// the biphoton system: twice the SPDC spectral bound (both photons) plus the
/// largest of the pump bound and |Δβ⁰|. Never fewer than 400 steps.
pub fn default_steps(lat: &Lattice, detune: f64) -> usize {
    let spdc = lat.hamiltonian(Field::Spdc).spectral_bound();
    let pump = lat.hamiltonian(Field::Pump).spectral_bound();
    let rate = 2.0 * spdc + pump.max(detune.abs());
    let n = (40.0 * rate * lat.length).ceil();
    (n as usize).max(400)
}

/// Complex tridiagonal generator evaluated at some z. `up[k]` multiplies
/// `x[k+1]` in row `k`; `down[k]` multiplies `x[k]` in row `k+1`.
struct Generator {
    diag: Vec<Complex64>,
    up: Vec<Complex64>,
    down: Vec<Complex64>,
}

impl Generator {
    fn from_real(h: &Tridiagonal) -> Self {
        let off: Vec<Complex64> = h.off.iter().map(|&c| Complex64::from(c)).collect();
        Generator {
            diag: h.diag.iter().map(|&d| Complex64::from(d)).collect(),
            up: off.clone(),
            down: off,
        }
    }

    /// Row `i` of the generator applied to the strided vector `x[offset + j*stride]`.
    #[inline]
    fn row(&self, x: &[Complex64], offset: usize, stride: usize, i: usize) -> Complex64 {
        let n = self.diag.len();
        let mut acc = self.diag[i] * x[offset + i * stride];
        if i > 0 {
            acc += self.down[i - 1] * x[offset + (i - 1) * stride];
        }
        if i + 1 < n {
            acc += self.up[i] * x[offset + (i + 1) * stride];
        }
        acc
    }
}

/// How the coupled-mode equations are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Frame {
    /// Detunings on the diagonal of both Hamiltonians.
    Diagonal,
    /// Detunings removed by a site-dependent phase: couplings between sites
    /// `n` and `m` carry `e^{i(d_m − d_n)z}` and guide `n` generates pairs with
    /// mismatch Δβ⁰ + d_n.
    Rotating,
}

/// Joint pump + biphoton state: `[A_0..A_{N-1}, Ψ row-major]`.
struct System<'a> {
    lat: &'a Lattice,
    n: usize,
    frame: Frame,
    detune: f64,
    gain: f64,
    spdc: Generator,
    pump: Generator,
}

impl<'a> System<'a> {
    fn new(lat: &'a Lattice, detune: f64, frame: Frame) -> Self {
        System {
            lat,
            n: lat.n_guides(),
            frame,
            detune,
            gain: lat.spdc_gain,
            spdc: Generator::from_real(&lat.hamiltonian(Field::Spdc)),
            pump: Generator::from_real(&lat.hamiltonian(Field::Pump)),
        }
    }

    fn initial(&self) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.n + self.n * self.n];
        y[self.n / 2] = Complex64::new(1.0, 0.0);
        y
    }

    fn update_generators(&mut self, z: f64) {
        if self.frame == Frame::Diagonal {
            return;
        }
        let d = &self.lat.detunings;
        for (gen, couplings) in [
            (&mut self.spdc, &self.lat.couplings_spdc),
            (&mut self.pump, &self.lat.couplings_pump),
        ] {
            for k in 0..couplings.len() {
                let phase = (d[k + 1] - d[k]) * z;
                gen.up[k] = Complex64::from_polar(couplings[k], phase);
                gen.down[k] = Complex64::from_polar(couplings[k], -phase);
            }
            gen.diag.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        }
    }

    fn rhs(&mut self, z: f64, y: &[Complex64], out: &mut [Complex64]) {
        self.update_generators(z);
        let n = self.n;
        for i in 0..n {
            out[i] = I * self.pump.row(y, 0, 1, i);
        }
        let psi = n;
        for a in 0..n {
            for b in 0..n {
                // column b of Ψ for the signal index, row a for the idler index
                let h_psi = self.spdc.row(y, psi + b, n, a);
                let psi_h = self.spdc.row(y, psi + a * n, 1, b);
                out[psi + a * n + b] = I * (h_psi + psi_h);
            }
        }
        for a in 0..n {
            let mismatch = match self.frame {
                Frame::Diagonal => self.detune,
                Frame::Rotating => self.detune + self.lat.detunings[a],
            };
            let source = y[a] * Complex64::from_polar(self.gain, -mismatch * z);
            out[psi + a * n + a] += source;
        }
    }
}

struct Rk4Scratch {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4Scratch {
    fn new(len: usize) -> Self {
        let z = || vec![Complex64::new(0.0, 0.0); len];
        Rk4Scratch {
            k1: z(),
            k2: z(),
            k3: z(),
            k4: z(),
            tmp: z(),
        }
    }
}

fn rk4_step(sys: &mut System, z: f64, h: f64, y: &mut [Complex64], s: &mut Rk4Scratch) {
    sys.rhs(z, y, &mut s.k1);
    for (t, (yi, k)) in s.tmp.iter_mut().zip(y.iter().zip(&s.k1)) {
        *t = yi + k * (0.5 * h);
    }
    sys.rhs(z + 0.5 * h, &s.tmp, &mut s.k2);
    for (t, (yi, k)) in s.tmp.iter_mut().zip(y.iter().zip(&s.k2)) {
        *t = yi + k * (0.5 * h);
    }
    sys.rhs(z + 0.5 * h, &s.tmp, &mut s.k3);
    for (t, (yi, k)) in s.tmp.iter_mut().zip(y.iter().zip(&s.k3)) {
        *t = yi + k * h;
    }
    sys.rhs(z + h, &s.tmp, &mut s.k4);
    for i in 0..y.len() {
        y[i] += (s.k1[i] + (s.k2[i] + s.k3[i]) * 2.0 + s.k4[i]) * (h / 6.0);
    }
}

fn integrate(lat: &Lattice, detune: f64, steps: usize, frame: Frame) -> Vec<Complex64> {
    let mut sys = System::new(lat, detune, frame);
    let mut y = sys.initial();
    let mut scratch = Rk4Scratch::new(y.len());
    let h = lat.length / steps as f64;
    for k in 0..steps {
        rk4_step(&mut sys, k as f64 * h, h, &mut y, &mut scratch);
    }
    y
}

fn unpack(lat: &Lattice, y: &[Complex64]) -> (PumpField, BiphotonState) {
    let n = lat.n_guides();
    let pump = PumpField {
        amplitudes: DVector::from_column_slice(&y[..n]),
        z: lat.length,
    };
    let psi = DMatrix::from_row_slice(n, n, &y[n..]);
    (
        pump,
        BiphotonState {
            psi,
            z: lat.length,
        },
    )
}

/// Evolves the pump injected into the central guide and returns it at each
/// requested position. Positions must be ascending and lie in `[0, L]`.
pub fn propagate_pump(lat: &Lattice, z_samples: &[f64]) -> Result<Vec<PumpField>> {
    if z_samples.windows(2).any(|w| w[1] < w[0])
        || z_samples.iter().any(|&z| !(0.0..=lat.length).contains(&z))
    {
        return Err(Error::InvalidLattice(
            "pump sample positions must be ascending within [0, L]".into(),
        ));
    }
    let n = lat.n_guides();
    let h_max = lat.length / default_steps(lat, 0.0) as f64;
    let gen = Generator::from_real(&lat.hamiltonian(Field::Pump));
    let rhs = |x: &[Complex64], out: &mut [Complex64]| {
        for i in 0..n {
            out[i] = I * gen.row(x, 0, 1, i);
        }
    };

    let zero = Complex64::new(0.0, 0.0);
    let mut a = vec![zero; n];
    a[n / 2] = Complex64::new(1.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);

    let mut z = 0.0;
    let mut out = Vec::with_capacity(z_samples.len());
    for &target in z_samples {
        let span = target - z;
        let steps = (span / h_max).ceil() as usize;
        if steps > 0 {
            let h = span / steps as f64;
            for _ in 0..steps {
                rhs(&a, &mut k1);
                for i in 0..n {
                    tmp[i] = a[i] + k1[i] * (0.5 * h);
                }
                rhs(&tmp, &mut k2);
                for i in 0..n {
                    tmp[i] = a[i] + k2[i] * (0.5 * h);
                }
                rhs(&tmp, &mut k3);
                for i in 0..n {
                    tmp[i] = a[i] + k3[i] * h;
                }
                rhs(&tmp, &mut k4);
                for i in 0..n {
                    a[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
                }
            }
        }
        z = target;
        let field = PumpField {
            amplitudes: DVector::from_column_slice(&a),
            z,
        };
        let drift = (field.norm_sqr() - 1.0).abs();
        if drift > OdeOptions::default().norm_tol {
            return Err(Error::NormDrift {
                drift,
                tolerance: OdeOptions::default().norm_tol,
            });
        }
        out.push(field);
    }
    Ok(out)
}

/// Integrates the biphoton amplitude to z = L with the pump co-integrated on
/// the same grid.
pub fn integrate_biphoton(lat: &Lattice, d: DetuneValue) -> Result<BiphotonState> {
    integrate_biphoton_with(lat, d, &OdeOptions::default())
}

pub fn integrate_biphoton_with(
    lat: &Lattice,
    d: DetuneValue,
    opts: &OdeOptions,
) -> Result<BiphotonState> {
    solve(lat, d, opts, Frame::Diagonal)
}

/// Same equations with the detunings moved into z-dependent coupling phases
/// and a site-dependent mismatch. Ψ differs from [`integrate_biphoton`] by
/// per-site phases only, so |Ψ_ab| agrees.
pub fn integrate_biphoton_rotating_frame(
    lat: &Lattice,
    d: DetuneValue,
    opts: &OdeOptions,
) -> Result<BiphotonState> {
    solve(lat, d, opts, Frame::Rotating)
}

fn solve(lat: &Lattice, d: DetuneValue, opts: &OdeOptions, frame: Frame) -> Result<BiphotonState> {
    let steps = opts.steps.unwrap_or_else(|| default_steps(lat, d.0));
    let y = integrate(lat, d.0, steps, frame);
    let (pump, state) = unpack(lat, &y);

    let drift = (pump.norm_sqr() - 1.0).abs();
    if drift > opts.norm_tol {
        return Err(Error::NormDrift {
            drift,
            tolerance: opts.norm_tol,
        });
    }

    if let Some(tol) = opts.convergence_tol {
        let fine = integrate(lat, d.0, 2 * steps, frame);
        let (_, fine) = unpack(lat, &fine);
        let scale = (lat.spdc_gain * lat.length).abs().max(f64::MIN_POSITIVE);
        let change = (fine.central().norm() - state.central().norm()).abs() / scale;
        if change > tol {
            return Err(Error::NotConverged {
                change,
                tolerance: tol,
            });
        }
    }
    Ok(state)
}
