//! File-producing commands: `spectrum`, `sweep`, `modes` and `compare`.
//!
//! Every command writes its CSV tables, an SVG rendering and a
//! `manifest.json` into `run.output_dir`. CSV content depends only on the
//! configuration, never on the thread count.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::config::RunConfig;
use crate::dynamics::DetuneValue;
use crate::ensemble::{disorder_sweep_with, row_seed, with_threads, SweepOptions, SweepResult};
use crate::error::{Error, Result};
use crate::lattice::{apply_disorder, build_lattice, DisorderSpec, Field, Geometry, Lattice, RNG_SCHEME};
use crate::output::{color, render_svg, write_file, Cell, CsvTable, Panel, Series};
use crate::spectrum::{detune_to_wavelength, resonance_spectrum, Spectrum};
use crate::supermodes::{eigendecompose, mode_diagnostics, mode_table, ModeDiagnostics};

pub const SPECTRUM_COLUMNS: [&str; 5] = [
    "realization",
    "disorder",
    "detune_mm_inv",
    "dlambda_nm",
    "intensity_norm",
];

pub const SWEEP_COLUMNS: [&str; 9] = [
    "geometry",
    "disorder",
    "n",
    "overlap_mean",
    "overlap_std",
    "shift_mean_nm",
    "shift_std_nm",
    "shift_mean_mm_inv",
    "shift_std_mm_inv",
];

pub const MODES_COLUMNS: [&str; 7] = [
    "field",
    "index",
    "eigenvalue_mm_inv",
    "participation_ratio",
    "central_weight",
    "odd_sublattice_weight",
    "localized",
];

/// Realization id used for the disorder-free spectrum in `spectrum.csv`.
pub const REFERENCE_ID: i64 = -1;

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub rng_scheme: &'static str,
    pub config: RunConfig,
    pub wall_clock_seconds: f64,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub diagnostics: serde_json::Value,
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub manifest: PathBuf,
}

struct Run<'a> {
    cfg: &'a RunConfig,
    command: &'static str,
    started: Instant,
    files: Vec<PathBuf>,
    warnings: Vec<String>,
}

impl<'a> Run<'a> {
    fn new(cfg: &'a RunConfig, command: &'static str) -> Self {
        Run {
            cfg,
            command,
            started: Instant::now(),
            files: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = write_file(&self.cfg.run.output_dir, name, contents)?;
        self.files.push(path);
        Ok(())
    }

    fn finish(self, diagnostics: serde_json::Value) -> Result<CommandOutput> {
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: self.command.to_string(),
            rng_scheme: RNG_SCHEME,
            config: self.cfg.clone(),
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            files: self.files.clone(),
            warnings: self.warnings.clone(),
            diagnostics,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        let path = write_file(&self.cfg.run.output_dir, "manifest.json", &text)?;
        Ok(CommandOutput {
            files: self.files,
            warnings: self.warnings,
            manifest: path,
        })
    }
}

fn sweep_options(cfg: &RunConfig) -> SweepOptions {
    SweepOptions {
        diagonal_strength: cfg.disorder.diagonal_strength,
        cross_check: true,
    }
}

fn disorder_for(cfg: &RunConfig, disorder: f64, row: usize, index: usize) -> DisorderSpec {
    DisorderSpec {
        diagonal_strength: cfg.disorder.diagonal_strength,
        ..DisorderSpec::new(disorder, row_seed(cfg.run.seed, row), index as u64)
    }
}

/// One labelled spectrum of `cmd_spectrum`.
#[derive(Debug, Clone)]
pub struct SpectrumBlock {
    pub realization: i64,
    pub disorder: f64,
    pub spectrum: Spectrum,
}

/// Disorder-free spectrum plus `realizations` disordered ones for every
/// non-zero strength. Realization `i` at strength index `k` is the same
/// lattice the sweep uses for that row.
pub fn spectrum_blocks(cfg: &RunConfig) -> Result<Vec<SpectrumBlock>> {
    let spec = cfg.lattice.spec();
    let grid = cfg.grid()?;
    let nominal = build_lattice(&spec)?;
    let solver = cfg.run.solver;

    let mut jobs: Vec<(i64, f64, Option<DisorderSpec>)> = vec![(REFERENCE_ID, 0.0, None)];
    for (k, &d) in cfg.disorder.strengths.iter().enumerate() {
        if d > 0.0 || cfg.disorder.diagonal_strength > 0.0 {
            for i in 0..cfg.disorder.realizations {
                jobs.push((i as i64, d, Some(disorder_for(cfg, d, k, i))));
            }
        }
    }
    use rayon::prelude::*;
    jobs.into_par_iter()
        .map(|(realization, disorder, dis)| {
            let lat = match dis {
                Some(dis) => apply_disorder(&nominal, &dis)?,
                None => nominal.clone(),
            };
            Ok(SpectrumBlock {
                realization,
                disorder,
                spectrum: resonance_spectrum(&lat, &grid, solver)?,
            })
        })
        .collect()
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<CommandOutput> {
    with_threads(cfg.run.threads, || {
        let mut run = Run::new(cfg, "spectrum");
        run.warnings.extend(cfg.lattice.spec().warnings());
        let blocks = spectrum_blocks(cfg)?;

        let mut table = CsvTable::new(&SPECTRUM_COLUMNS);
        let mut panel = Panel::new(
            &format!("{} resonance spectra", cfg.lattice.geometry),
            "detune (1/mm)",
            "normalized intensity",
        );
        for (k, b) in blocks.iter().enumerate() {
            if b.spectrum.peak_on_boundary {
                run.warnings.push(format!(
                    "realization {} at disorder {}: peak on grid boundary",
                    b.realization, b.disorder
                ));
            }
            let pts = b.spectrum.grid.points();
            for (x, y) in pts.iter().zip(&b.spectrum.intensity) {
                table.row(vec![
                    b.realization.into(),
                    b.disorder.into(),
                    (*x).into(),
                    detune_to_wavelength(DetuneValue(*x), &cfg.wavelength).into(),
                    (*y).into(),
                ]);
            }
            let reference = b.realization == REFERENCE_ID;
            panel.series.push(Series::Line {
                label: if reference { "disorder-free".into() } else { String::new() },
                x: pts.to_vec(),
                y: b.spectrum.intensity.clone(),
                color: if reference { "black".into() } else { color(k).into() },
                width: if reference { 3.0 } else { 1.0 },
            });
        }
        // draw the reference last so it stays on top
        panel.series.rotate_left(1);
        run.write("spectrum.csv", &table.render())?;
        run.write("spectrum.svg", &render_svg(&[panel]))?;

        let peaks: Vec<_> = blocks
            .iter()
            .map(|b| {
                serde_json::json!({
                    "realization": b.realization,
                    "disorder": b.disorder,
                    "peak_detune_mm_inv": b.spectrum.peak_detune,
                    "peak_on_boundary": b.spectrum.peak_on_boundary,
                })
            })
            .collect();
        run.finish(serde_json::json!({ "peaks": peaks }))
    })
}

fn sweep_rows(table: &mut CsvTable, sweep: &SweepResult) {
    for row in &sweep.rows {
        table.row(vec![
            sweep.geometry.label().into(),
            row.disorder.into(),
            row.n_realizations.into(),
            row.overlap_mean.into(),
            row.overlap_std.into(),
            row.shift_mean_nm.into(),
            row.shift_std_nm.into(),
            row.shift_mean_db.into(),
            row.shift_std_db.into(),
        ]);
    }
}

fn sweep_warnings(sweep: &SweepResult) -> Vec<String> {
    sweep
        .rows
        .iter()
        .flat_map(|r| {
            r.boundary_peaks.iter().map(move |i| {
                format!(
                    "{} disorder {}: realization {i} peaks on the grid boundary",
                    sweep.geometry, r.disorder
                )
            })
        })
        .collect()
}

fn run_sweep(cfg: &RunConfig, geometry: Geometry) -> Result<SweepResult> {
    disorder_sweep_with(
        &cfg.lattice.spec_for(geometry),
        &cfg.disorder.strengths,
        cfg.disorder.realizations,
        cfg.run.seed,
        &cfg.grid()?,
        &cfg.wavelength,
        &sweep_options(cfg),
    )
}

fn sweep_panels(sweeps: &[SweepResult]) -> Vec<Panel> {
    let mut overlap = Panel::new("spectral overlap", "disorder", "overlap mean ± std");
    let mut shift = Panel::new("peak shift fluctuation", "disorder", "shift std (nm)");
    for (k, s) in sweeps.iter().enumerate() {
        let x: Vec<f64> = s.rows.iter().map(|r| r.disorder).collect();
        overlap.series.push(Series::ErrorBars {
            label: s.geometry.label().into(),
            x: x.clone(),
            y: s.rows.iter().map(|r| r.overlap_mean).collect(),
            err: s.rows.iter().map(|r| r.overlap_std).collect(),
            color: color(k).into(),
        });
        shift.series.push(Series::Line {
            label: s.geometry.label().into(),
            x,
            y: s.rows.iter().map(|r| r.shift_std_nm).collect(),
            color: color(k).into(),
            width: 1.5,
        });
    }
    vec![overlap, shift]
}

fn realization_table(sweeps: &[SweepResult]) -> CsvTable {
    let mut t = CsvTable::new(&["geometry", "disorder", "realization", "overlap", "shift_nm", "shift_mm_inv"]);
    for s in sweeps {
        for row in &s.rows {
            for r in &row.per_realization {
                t.row(vec![
                    s.geometry.label().into(),
                    row.disorder.into(),
                    r.index.into(),
                    r.overlap.into(),
                    r.shift_nm.into(),
                    r.shift_mm_inv.into(),
                ]);
            }
        }
    }
    t
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<CommandOutput> {
    with_threads(cfg.run.threads, || {
        let mut run = Run::new(cfg, "sweep");
        run.warnings.extend(cfg.lattice.spec().warnings());
        let sweep = run_sweep(cfg, cfg.lattice.geometry)?;
        run.warnings.extend(sweep_warnings(&sweep));

        let mut table = CsvTable::new(&SWEEP_COLUMNS);
        sweep_rows(&mut table, &sweep);
        run.write("sweep.csv", &table.render())?;
        run.write(
            "sweep_realizations.csv",
            &realization_table(std::slice::from_ref(&sweep)).render(),
        )?;
        run.write("sweep.svg", &render_svg(&sweep_panels(std::slice::from_ref(&sweep))))?;
        run.finish(serde_json::json!({
            "reference_peak_mm_inv": sweep.reference.peak_detune,
            "cross_check": sweep.cross_check,
        }))
    })
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<CommandOutput> {
    let geometries = &cfg.compare.geometries;
    let repeated = geometries.iter().enumerate().any(|(i, g)| geometries[..i].contains(g));
    if geometries.len() < 2 || repeated {
        return Err(Error::Config(
            "compare needs at least two distinct geometries".into(),
        ));
    }
    with_threads(cfg.run.threads, || {
        let mut run = Run::new(cfg, "compare");
        let mut sweeps = Vec::new();
        for &g in geometries {
            run.warnings.extend(cfg.lattice.spec_for(g).warnings());
            let s = run_sweep(cfg, g)?;
            run.warnings.extend(sweep_warnings(&s));
            sweeps.push(s);
        }

        let mut table = CsvTable::new(&SWEEP_COLUMNS);
        sweeps.iter().for_each(|s| sweep_rows(&mut table, s));
        run.write("compare.csv", &table.render())?;
        run.write("compare_realizations.csv", &realization_table(&sweeps).render())?;

        let mut labels = Vec::new();
        let mut stds = Vec::new();
        let mut overlaps = Vec::new();
        let mut colors = Vec::new();
        for (row, &d) in cfg.disorder.strengths.iter().enumerate() {
            for (k, s) in sweeps.iter().enumerate() {
                labels.push(format!("{} Δ={}", s.geometry, d));
                stds.push(s.rows[row].shift_std_nm);
                overlaps.push(s.rows[row].overlap_mean);
                colors.push(color(k).to_string());
            }
        }
        let mut p1 = Panel::new("resonance fluctuation", "", "shift std (nm)");
        p1.series.push(Series::Bars {
            labels: labels.clone(),
            values: stds,
            colors: colors.clone(),
        });
        let mut p2 = Panel::new("mean spectral overlap", "", "overlap");
        p2.series.push(Series::Bars {
            labels,
            values: overlaps,
            colors,
        });
        run.write("compare.svg", &render_svg(&[p1, p2]))?;

        let checks: Vec<_> = sweeps
            .iter()
            .map(|s| serde_json::json!({ "geometry": s.geometry, "cross_check": s.cross_check }))
            .collect();
        run.finish(serde_json::json!({ "cross_checks": checks }))
    })
}

/// Lattice analysed by `modes`: realization 0 at the largest configured
/// disorder strength, or the nominal lattice when that strength is zero.
pub fn modes_lattice(cfg: &RunConfig) -> Result<Lattice> {
    let nominal = build_lattice(&cfg.lattice.spec())?;
    let strengths = &cfg.disorder.strengths;
    let row = strengths.len() - 1;
    let d = strengths[row];
    if d == 0.0 && cfg.disorder.diagonal_strength == 0.0 {
        return Ok(nominal);
    }
    apply_disorder(&nominal, &disorder_for(cfg, d, row, 0))
}

pub fn cmd_modes(cfg: &RunConfig) -> Result<CommandOutput> {
    let mut run = Run::new(cfg, "modes");
    run.warnings.extend(cfg.lattice.spec().warnings());
    let lat = modes_lattice(cfg)?;

    let mut table = CsvTable::new(&MODES_COLUMNS);
    let n = lat.n_guides();
    let mut vec_header = vec!["field".to_string(), "site".to_string()];
    vec_header.extend((0..n).map(|m| format!("mode_{m}")));
    let mut vectors = CsvTable::new(&vec_header);

    let mut diagnostics: Vec<(Field, ModeDiagnostics)> = Vec::new();
    let mut profile = Panel::new("localized supermode", "site", "amplitude");
    let mut levels = Panel::new("supermode spectrum", "mode index", "eigenvalue (1/mm)");
    for (k, field) in [Field::Spdc, Field::Pump].into_iter().enumerate() {
        let label = match field {
            Field::Spdc => "spdc",
            Field::Pump => "pump",
        };
        let basis = eigendecompose(&lat, field);
        let diag = mode_diagnostics(&basis, &lat);
        for s in mode_table(&basis) {
            table.row(vec![
                label.into(),
                s.index.into(),
                s.eigenvalue.into(),
                s.participation_ratio.into(),
                s.central_weight.into(),
                s.odd_sublattice_weight.into(),
                usize::from(s.index == diag.mode_index).into(),
            ]);
        }
        for site in 0..n {
            let mut row: Vec<Cell> = vec![label.into(), site.into()];
            row.extend((0..n).map(|m| Cell::Num(basis.eigenvectors[(site, m)])));
            vectors.row(row);
        }
        profile.series.push(Series::Line {
            label: label.into(),
            x: (0..n).map(|s| s as f64).collect(),
            y: basis.mode(diag.mode_index),
            color: color(k).into(),
            width: 2.0,
        });
        levels.series.push(Series::Line {
            label: label.into(),
            x: (0..n).map(|s| s as f64).collect(),
            y: basis.eigenvalues.clone(),
            color: color(k).into(),
            width: 1.5,
        });
        diagnostics.push((field, diag));
    }
    run.write("modes.csv", &table.render())?;
    run.write("modes_vectors.csv", &vectors.render())?;
    run.write("modes.svg", &render_svg(&[levels, profile]))?;
    run.finish(serde_json::json!({
        "lattice": lat,
        "localized": diagnostics
            .iter()
            .map(|(f, d)| serde_json::json!({ "field": f, "diagnostics": d }))
            .collect::<Vec<_>>(),
    }))
}
