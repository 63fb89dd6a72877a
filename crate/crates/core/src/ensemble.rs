//! Monte Carlo statistics over coupling-disorder realizations.
//!
//! Realizations are evaluated in parallel but every random draw is keyed by
//! its index and all aggregation happens in index order, so results do not
//! depend on the thread count.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{integrate_biphoton_with, DetuneValue, OdeOptions};
use crate::error::{Error, Result};
use crate::lattice::{apply_disorder, build_lattice, mix_seed, substream, DisorderSpec, Geometry, LatticeSpec};
use crate::spectrum::{
    peak_shift, resonance_spectrum, spectral_overlap, Solver, Spectrum, SpectrumGrid, WavelengthMap,
};
use crate::supermodes::SupermodeModel;

/// Default realizations per disorder strength.
pub const DEFAULT_REALIZATIONS: usize = 300;
/// Disordered samples per array type in the hardware experiment.
pub const EXPERIMENT_REALIZATIONS: usize = 8;

/// Key separating sweep-row seeds from realization seeds.
const ROW_KEY: u64 = 0x5357_4545_505f_524f;
/// Key of the stream that picks the cross-checked realization.
const GUARD_KEY: u64 = 0x4755_4152_4400_0000;

/// Tolerance of the closed-form vs RK4 guard run inside every sweep.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealizationRecord {
    pub index: usize,
    pub overlap: f64,
    pub shift_nm: f64,
    pub shift_mm_inv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub disorder: f64,
    pub n_realizations: usize,
    pub overlap_mean: f64,
    pub overlap_std: f64,
    pub shift_mean_nm: f64,
    pub shift_std_nm: f64,
    pub shift_mean_db: f64,
    pub shift_std_db: f64,
    pub per_realization: Vec<RealizationRecord>,
    /// Realizations whose spectral maximum fell on the grid boundary.
    pub boundary_peaks: Vec<usize>,
}

/// Sample mean and unbiased standard deviation, summed in slice order.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Knobs beyond the core ensemble parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepOptions {
    /// Experimental on-site disorder amplitude (mm⁻¹) added to every draw.
    pub diagonal_strength: f64,
    /// Re-solve one random realization with the RK4 integrator.
    pub cross_check: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            diagonal_strength: 0.0,
            cross_check: true,
        }
    }
}

fn disorder_spec(disorder: f64, seed: u64, index: usize, opts: &SweepOptions) -> DisorderSpec {
    DisorderSpec {
        diagonal_strength: opts.diagonal_strength,
        ..DisorderSpec::new(disorder, seed, index as u64)
    }
}

fn realization(
    spec: &LatticeSpec,
    dis: &DisorderSpec,
    grid: &SpectrumGrid,
) -> Result<Spectrum> {
    let nominal = build_lattice(spec)?;
    let lat = apply_disorder(&nominal, dis)?;
    resonance_spectrum(&lat, grid, Solver::ClosedForm)
}

fn aggregate(
    disorder: f64,
    reference: &Spectrum,
    spectra: &[Spectrum],
    map: &WavelengthMap,
) -> Result<EnsembleStats> {
    let mut records = Vec::with_capacity(spectra.len());
    let mut boundary_peaks = Vec::new();
    for (index, s) in spectra.iter().enumerate() {
        if s.peak_on_boundary {
            boundary_peaks.push(index);
        }
        records.push(RealizationRecord {
            index,
            overlap: spectral_overlap(s, reference)?,
            shift_nm: peak_shift(s, reference, map)?,
            shift_mm_inv: s.peak_detune - reference.peak_detune,
        });
    }
    let col = |f: fn(&RealizationRecord) -> f64| records.iter().map(f).collect::<Vec<_>>();
    let (overlap_mean, overlap_std) = mean_std(&col(|r| r.overlap));
    let (shift_mean_nm, shift_std_nm) = mean_std(&col(|r| r.shift_nm));
    let (shift_mean_db, shift_std_db) = mean_std(&col(|r| r.shift_mm_inv));
    Ok(EnsembleStats {
        disorder,
        n_realizations: records.len(),
        overlap_mean,
        overlap_std,
        shift_mean_nm,
        shift_std_nm,
        shift_mean_db,
        shift_std_db,
        per_realization: records,
        boundary_peaks,
    })
}

#[allow(clippy::too_many_arguments)]
fn ensemble_with_reference(
    spec: &LatticeSpec,
    disorder: f64,
    n: usize,
    seed: u64,
    grid: &SpectrumGrid,
    map: &WavelengthMap,
    reference: &Spectrum,
    opts: &SweepOptions,
) -> Result<EnsembleStats> {
    if n < 2 {
        return Err(Error::Config(format!("an ensemble needs at least 2 realizations, got {n}")));
    }
    if !(0.0..1.0).contains(&disorder) {
        return Err(Error::InvalidDisorder(disorder));
    }
    let spectra = (0..n)
        .into_par_iter()
        .map(|i| realization(spec, &disorder_spec(disorder, seed, i, opts), grid))
        .collect::<Result<Vec<_>>>()?;
    aggregate(disorder, reference, &spectra, map)
}

/// Statistics of `n` disorder realizations at strength `disorder` against the
/// disorder-free spectrum, using the closed-form solver.
pub fn run_ensemble(
    spec: &LatticeSpec,
    disorder: f64,
    n: usize,
    master_seed: u64,
    grid: &SpectrumGrid,
    map: &WavelengthMap,
) -> Result<EnsembleStats> {
    map.validate()?;
    let reference = resonance_spectrum(&build_lattice(spec)?, grid, Solver::ClosedForm)?;
    ensemble_with_reference(
        spec,
        disorder,
        n,
        master_seed,
        grid,
        map,
        &reference,
        &SweepOptions::default(),
    )
}

/// Outcome of the RK4 guard run during a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    pub disorder: f64,
    pub realization: usize,
    pub detunes: [f64; 3],
    pub max_relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub geometry: Geometry,
    pub spec: LatticeSpec,
    pub master_seed: u64,
    pub n_realizations: usize,
    pub rows: Vec<EnsembleStats>,
    pub reference: Spectrum,
    pub cross_check: Option<CrossCheck>,
}

/// Seed of sweep row `row`; realizations inside it are keyed by index.
pub fn row_seed(master_seed: u64, row: usize) -> u64 {
    mix_seed(master_seed, &[ROW_KEY, row as u64])
}

/// One ensemble per disorder strength, each drawn from its own substream.
pub fn disorder_sweep(
    spec: &LatticeSpec,
    disorders: &[f64],
    n: usize,
    master_seed: u64,
    grid: &SpectrumGrid,
    map: &WavelengthMap,
) -> Result<SweepResult> {
    disorder_sweep_with(spec, disorders, n, master_seed, grid, map, &SweepOptions::default())
}

pub fn disorder_sweep_with(
    spec: &LatticeSpec,
    disorders: &[f64],
    n: usize,
    master_seed: u64,
    grid: &SpectrumGrid,
    map: &WavelengthMap,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    map.validate()?;
    if disorders.is_empty() {
        return Err(Error::Config("empty disorder list".into()));
    }
    if disorders.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("disorder values must be strictly ascending".into()));
    }
    let reference = resonance_spectrum(&build_lattice(spec)?, grid, Solver::ClosedForm)?;
    let rows = disorders
        .iter()
        .enumerate()
        .map(|(k, &d)| {
            ensemble_with_reference(spec, d, n, row_seed(master_seed, k), grid, map, &reference, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let cross_check = if opts.cross_check {
        Some(cross_check(spec, disorders, n, master_seed, grid, opts)?)
    } else {
        None
    };
    Ok(SweepResult {
        geometry: spec.geometry,
        spec: spec.clone(),
        master_seed,
        n_realizations: n,
        rows,
        reference,
        cross_check,
    })
}

/// Re-solves one randomly chosen realization of the sweep with the RK4
/// integrator at three detunings and compares full Ψ matrices.
fn cross_check(
    spec: &LatticeSpec,
    disorders: &[f64],
    n: usize,
    master_seed: u64,
    grid: &SpectrumGrid,
    opts: &SweepOptions,
) -> Result<CrossCheck> {
    let mut rng = substream(master_seed, &[GUARD_KEY]);
    let row = rng.gen_range(0..disorders.len());
    let index = rng.gen_range(0..n);
    let pts = grid.points();
    let detunes = [0, 1, 2].map(|_| pts[rng.gen_range(0..pts.len())]);

    let nominal = build_lattice(spec)?;
    let lat = apply_disorder(
        &nominal,
        &disorder_spec(disorders[row], row_seed(master_seed, row), index, opts),
    )?;
    let model = SupermodeModel::new(&lat);
    let mut worst = 0.0_f64;
    for &d in &detunes {
        let exact = model.biphoton(DetuneValue(d));
        let ode = integrate_biphoton_with(&lat, DetuneValue(d), &OdeOptions::unchecked())?;
        worst = worst.max(exact.relative_deviation(&ode));
    }
    if worst > CROSS_CHECK_TOL {
        return Err(Error::SolverMismatch {
            realization: index,
            deviation: worst,
        });
    }
    Ok(CrossCheck {
        disorder: disorders[row],
        realization: index,
        detunes,
        max_relative_deviation: worst,
    })
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(geometry: Geometry) -> LatticeSpec {
        LatticeSpec {
            n_guides: 5,
            ..LatticeSpec::reference(geometry)
        }
    }

    #[test]
    fn mean_std_unbiased() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0_f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_disorder_gives_trivial_stats() {
        let spec = small(Geometry::Homogeneous);
        let grid = SpectrumGrid::default_for(2.5);
        let st = run_ensemble(&spec, 0.0, 4, 1, &grid, &WavelengthMap::default()).unwrap();
        assert!((st.overlap_mean - 1.0).abs() < 1e-12);
        assert!(st.overlap_std < 1e-12);
        assert_eq!(st.shift_mean_nm, 0.0);
        assert_eq!(st.shift_std_nm, 0.0);
    }

    #[test]
    fn needs_two_realizations() {
        let grid = SpectrumGrid::default_for(2.5);
        let r = run_ensemble(&small(Geometry::Ssh), 0.1, 1, 0, &grid, &WavelengthMap::default());
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn sweep_rows_are_independent_of_neighbours() {
        let spec = small(Geometry::Homogeneous);
        let grid = SpectrumGrid::default_for(2.5);
        let map = WavelengthMap::default();
        let a = disorder_sweep(&spec, &[0.1, 0.3], 6, 9, &grid, &map).unwrap();
        let b = disorder_sweep(&spec, &[0.1, 0.2], 6, 9, &grid, &map).unwrap();
        assert_eq!(a.rows[0], b.rows[0]);
        assert_ne!(a.rows[1], b.rows[1]);
        assert!(a.cross_check.unwrap().max_relative_deviation < CROSS_CHECK_TOL);
    }

    #[test]
    fn sweep_rejects_unsorted_disorder() {
        let grid = SpectrumGrid::default_for(2.5);
        let r = disorder_sweep(&small(Geometry::Ssh), &[0.2, 0.1], 3, 0, &grid, &WavelengthMap::default());
        assert!(r.is_err());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let spec = small(Geometry::TrivialMode);
        let grid = SpectrumGrid::default_for(2.5);
        let map = WavelengthMap::default();
        let one = with_threads(1, || run_ensemble(&spec, 0.3, 16, 77, &grid, &map).unwrap());
        let four = with_threads(4, || run_ensemble(&spec, 0.3, 16, 77, &grid, &map).unwrap());
        assert_eq!(one, four);
    }
}
