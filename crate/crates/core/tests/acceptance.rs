//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spdc_lattice::commands::cmd_sweep;
use spdc_lattice::config::RunConfig;
use spdc_lattice::dynamics::{integrate_biphoton_with, OdeOptions};
use spdc_lattice::ensemble::mean_std;
use spdc_lattice::prelude::*;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn reference_grid() -> SpectrumGrid {
    SpectrumGrid::default_for(2.5)
}

fn sweep(geometry: Geometry, n_guides: usize, disorders: &[f64], seed: u64) -> SweepResult {
    let spec = LatticeSpec {
        n_guides,
        ..LatticeSpec::reference(geometry)
    };
    disorder_sweep(&spec, disorders, 300, seed, &reference_grid(), &WavelengthMap::default()).unwrap()
}

/// Bessel function of the first kind by its power series.
fn bessel_j(n: i32, x: f64) -> f64 {
    let m = n.unsigned_abs() as i32;
    let mut term = (0..m).fold(1.0, |acc, k| acc * (x / 2.0) / (k + 1) as f64);
    let mut sum = term;
    for k in 1..80 {
        term *= -(x * x / 4.0) / (k as f64 * (k + m) as f64);
        sum += term;
    }
    if n < 0 && m % 2 == 1 {
        -sum
    } else {
        sum
    }
}

fn solver_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let geometries = [Geometry::Homogeneous, Geometry::TrivialMode, Geometry::Ssh];
    let sizes = [1, 3, 5, 7, 13];
    let strengths = [0.0, 0.2, 0.4];
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let spec = LatticeSpec {
            n_guides: sizes[i % 5],
            ..LatticeSpec::reference(geometries[i % 3])
        };
        let nominal = build_lattice(&spec).unwrap();
        let dis = DisorderSpec::new(strengths[(i / 15) % 3], rng.gen(), rng.gen());
        let lat = apply_disorder(&nominal, &dis).unwrap();
        let model = SupermodeModel::new(&lat);
        for _ in 0..20 {
            let d = DetuneValue(rng.gen_range(-15.0..15.0));
            let exact = model.biphoton(d);
            let ode = integrate_biphoton_with(&lat, d, &OdeOptions::unchecked()).unwrap();
            worst = worst.max(exact.relative_deviation(&ode));
        }
    }
    let elapsed = start.elapsed();
    check(
        worst < 1e-6 && elapsed < Duration::from_secs(60),
        format!("max relative deviation {worst:.2e}, {:.1} s", elapsed.as_secs_f64()),
        format!("max relative deviation {worst:.2e} (< 1e-6), {:.1} s (< 60 s)", elapsed.as_secs_f64()),
    )
}

fn analytic_oracles() -> Outcome {
    let mut failures = Vec::new();

    // Single guide: sinc² with zeros at ±π/(L/2) and |Ψ| = γL on resonance.
    let single = Lattice::from_parts(Geometry::Homogeneous, vec![], vec![0.0], 0.2, 2.0, 1.0).unwrap();
    let peak = integrate_biphoton(&single, DetuneValue(0.0)).unwrap().central().norm();
    if (peak - 2.0).abs() > 1e-9 {
        failures.push(format!("|Psi| at resonance {peak}"));
    }
    for zero in [-PI, PI] {
        let v = integrate_biphoton(&single, DetuneValue(zero)).unwrap().central().norm();
        if v > 1e-9 {
            failures.push(format!("|Psi| at {zero:.4} is {v:.2e}"));
        }
    }

    // Two guides: the pump oscillates as cos(C_p z).
    let pair = Lattice::from_parts(Geometry::Homogeneous, vec![2.5], vec![0.0, 0.0], 0.2, PI, 1.0).unwrap();
    let zs: Vec<f64> = (0..=20).map(|k| PI * k as f64 / 20.0).collect();
    let fields = propagate_pump(&pair, &zs).unwrap();
    let c = pair.central_index();
    let rabi = fields
        .iter()
        .map(|f| (f.amplitudes[c].norm() - (0.5 * f.z).cos().abs()).abs())
        .fold(0.0, f64::max);
    if rabi > 1e-9 {
        failures.push(format!("Rabi deviation {rabi:.2e}"));
    }

    // 41 guides: discrete diffraction with |A_n| = |J_n(2 C_p z)|.
    let wide = build_lattice(&LatticeSpec {
        n_guides: 41,
        ..LatticeSpec::reference(Geometry::Homogeneous)
    })
    .unwrap();
    let field = &propagate_pump(&wide, &[2.0]).unwrap()[0];
    let diffraction = (0..41)
        .map(|k| {
            let n = k as i32 - 20;
            (field.amplitudes[k].norm() - bessel_j(n, 2.0).abs()).abs()
        })
        .fold(0.0, f64::max);
    if diffraction > 1e-3 {
        failures.push(format!("Bessel deviation {diffraction:.2e}"));
    }

    // A detuned guide resonates at minus its detuning.
    let detuned = Lattice::from_parts(Geometry::TrivialMode, vec![], vec![1.5], 0.2, 2.0, 1.0).unwrap();
    let grid = SpectrumGrid::uniform(-5.0, 2.0, 701).unwrap();
    let s = resonance_spectrum(&detuned, &grid, Solver::Ode).unwrap();
    if (s.peak_detune + 1.5).abs() > 1e-3 {
        failures.push(format!("detuned peak at {}", s.peak_detune));
    }

    check(
        failures.is_empty(),
        format!("sinc, Rabi {rabi:.1e}, Bessel {diffraction:.1e}, detuned peak {:.4}", s.peak_detune),
        failures.join("; "),
    )
}

fn topology_suite() -> Outcome {
    let c = 2.5;
    let mut worst_zero: f64 = 0.0;
    let mut worst_odd: f64 = 0.0;
    for geometry in [Geometry::Homogeneous, Geometry::Ssh] {
        for n in [5, 13, 21] {
            let spec = LatticeSpec {
                n_guides: n,
                ..LatticeSpec::reference(geometry)
            };
            let nominal = build_lattice(&spec).unwrap();
            for i in 0..300 {
                let lat = apply_disorder(&nominal, &DisorderSpec::new(0.9, 77, i)).unwrap();
                let d = mode_diagnostics(&eigendecompose(&lat, Field::Spdc), &lat);
                worst_zero = worst_zero.max(d.zero_mode_eigenvalue.abs());
                if geometry == Geometry::Ssh {
                    worst_odd = worst_odd.max(d.odd_sublattice_weight);
                }
            }
        }
    }

    let k = 0.5;
    let ssh = build_lattice(&LatticeSpec::reference(Geometry::Ssh)).unwrap();
    let d = mode_diagnostics(&eigendecompose(&ssh, Field::Spdc), &ssh);
    let ratio = d.localization_ratio.unwrap();
    let ratio_err = (ratio - (1.0 - k) / (1.0 + k)).abs();
    let gap = d.gap.unwrap();
    let gap_err = (gap - 2.0 * k * c).abs() / (2.0 * k * c);

    let larger: Vec<String> = [21, 41, 81]
        .iter()
        .map(|&n| {
            let lat = build_lattice(&LatticeSpec {
                n_guides: n,
                ..LatticeSpec::reference(Geometry::Ssh)
            })
            .unwrap();
            let g = mode_diagnostics(&eigendecompose(&lat, Field::Spdc), &lat).gap.unwrap();
            format!("N={n}: {g:.4}")
        })
        .collect();

    check(
        worst_zero < 1e-10 * c && worst_odd < 1e-10 && ratio_err < 1e-9 && gap_err < 0.05,
        format!(
            "zero eigenvalue {worst_zero:.1e}, odd weight {worst_odd:.1e}, ratio {ratio:.10}, gap {gap:.4}"
        ),
        format!(
            "zero eigenvalue {worst_zero:.2e}, odd weight {worst_odd:.2e}, ratio error {ratio_err:.2e}, \
             N=13 gap {gap:.4} is {:.1}% from 2KC = {} (larger arrays: {})",
            100.0 * gap_err,
            2.0 * k * c,
            larger.join(", ")
        ),
    )
}

fn homogeneous_spread() -> Outcome {
    let start = Instant::now();
    let stats = run_ensemble(
        &LatticeSpec::reference(Geometry::Homogeneous),
        0.4,
        300,
        2024,
        &reference_grid(),
        &WavelengthMap::default(),
    )
    .unwrap();
    let elapsed = start.elapsed();
    let std = stats.shift_std_nm;
    check(
        (0.1..=0.3).contains(&std) && elapsed < Duration::from_secs(120),
        format!("shift std {std:.4} nm, {:.1} s", elapsed.as_secs_f64()),
        format!("shift std {std:.4} nm (0.1..0.3), {:.1} s", elapsed.as_secs_f64()),
    )
}

fn ssh_protection() -> Outcome {
    let k = 0.5;
    let disorders = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];
    let s = sweep(Geometry::Ssh, 13, &disorders, 2024);
    let mut failures = Vec::new();
    for row in s.rows.iter().filter(|r| r.disorder <= 0.3 + 1e-12) {
        if !(row.overlap_mean > 0.95 && row.shift_std_nm < 0.05) {
            failures.push(format!(
                "at {} overlap {:.4}, std {:.4} nm",
                row.disorder, row.overlap_mean, row.shift_std_nm
            ));
        }
    }
    let base = s.rows[0].shift_std_nm;
    let onset = s.rows.iter().find(|r| r.shift_std_nm > 3.0 * base).map(|r| r.disorder);
    match onset {
        Some(x) if (0.5 * k..=2.0 * k).contains(&x) => {}
        other => failures.push(format!("onset {other:?} outside [{}, {}]", 0.5 * k, 2.0 * k)),
    }
    let stds: Vec<String> = s.rows.iter().map(|r| format!("{:.4}", r.shift_std_nm)).collect();
    check(
        failures.is_empty(),
        format!("onset at {:.1}, std by disorder [{}] nm", onset.unwrap_or(f64::NAN), stds.join(", ")),
        failures.join("; "),
    )
}

fn trivial_trend() -> Outcome {
    let disorders = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
    let s = sweep(Geometry::TrivialMode, 13, &disorders, 2024);
    let ys: Vec<f64> = s.rows.iter().map(|r| r.shift_std_nm).collect();
    let (mx, _) = mean_std(&disorders);
    let (my, _) = mean_std(&ys);
    let sxy: f64 = disorders.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = disorders.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = sxy * sxy / (sxx * syy);

    // A rise smaller than two standard errors of the mean counts as noise.
    let monotone = s.rows.windows(2).all(|w| {
        let se = (w[0].overlap_std.powi(2) + w[1].overlap_std.powi(2)).sqrt() / (w[0].n_realizations as f64).sqrt();
        w[1].overlap_mean <= w[0].overlap_mean + 2.0 * se
    });
    let overlaps: Vec<String> = s.rows.iter().map(|r| format!("{:.4}", r.overlap_mean)).collect();
    check(
        r2 > 0.9 && monotone,
        format!("R² {r2:.4}, overlap [{}]", overlaps.join(", ")),
        format!("R² {r2:.4} (> 0.9), monotone {monotone}, overlap [{}]", overlaps.join(", ")),
    )
}

fn geometry_ordering() -> Outcome {
    let disorders = [0.2, 0.4];
    let hom = sweep(Geometry::Homogeneous, 13, &disorders, 2024);
    let triv = sweep(Geometry::TrivialMode, 13, &disorders, 2024);
    let ssh = sweep(Geometry::Ssh, 13, &disorders, 2024);
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (i, &disorder) in disorders.iter().enumerate() {
        let (h, t, s) = (&hom.rows[i], &triv.rows[i], &ssh.rows[i]);
        let ratio = h.shift_std_nm.min(t.shift_std_nm) / s.shift_std_nm;
        summary.push(format!(
            "at {}: std {:.4}/{:.4}/{:.4} nm, overlap {:.3}/{:.3}/{:.3}",
            disorder, h.shift_std_nm, t.shift_std_nm, s.shift_std_nm, h.overlap_mean, t.overlap_mean, s.overlap_mean
        ));
        if ratio < 5.0 {
            failures.push(format!("at {disorder} separation only {ratio:.2}x"));
        }
        if s.overlap_mean <= h.overlap_mean.max(t.overlap_mean) {
            failures.push(format!("at {disorder} SSH overlap not the largest"));
        }
    }
    check(failures.is_empty(), summary.join("; "), format!("{}; {}", failures.join("; "), summary.join("; ")))
}

fn five_guides() -> Outcome {
    let s = sweep(Geometry::Ssh, 5, &[0.2], 2024);
    let row = &s.rows[0];
    check(
        row.overlap_mean > 0.95 && row.shift_std_nm < 0.05,
        format!("overlap {:.4}, std {:.4} nm", row.overlap_mean, row.shift_std_nm),
        format!("overlap {:.4} (> 0.95), std {:.4} nm (< 0.05)", row.overlap_mean, row.shift_std_nm),
    )
}

fn determinism() -> Outcome {
    let outputs: Vec<(Vec<u8>, Vec<u8>)> = [1, 3, 8]
        .iter()
        .map(|&threads| {
            let dir = tempfile::tempdir().unwrap();
            let mut cfg = RunConfig::default();
            cfg.disorder.strengths = vec![0.0, 0.2, 0.4];
            cfg.disorder.realizations = 40;
            cfg.run.threads = threads;
            cfg.run.output_dir = dir.path().to_path_buf();
            cmd_sweep(&cfg).unwrap();
            (
                std::fs::read(dir.path().join("sweep.csv")).unwrap(),
                std::fs::read(dir.path().join("sweep_realizations.csv")).unwrap(),
            )
        })
        .collect();
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    check(
        same,
        "sweep CSVs identical with 1, 3 and 8 threads".into(),
        "sweep CSVs differ between thread counts".into(),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 solver equivalence", solver_equivalence),
        ("2 analytic oracles", analytic_oracles),
        ("3 topology suite", topology_suite),
        ("4 homogeneous shift spread", homogeneous_spread),
        ("5 SSH protection", ssh_protection),
        ("6 trivial-mode trend", trivial_trend),
        ("7 geometry ordering", geometry_ordering),
        ("8 five-guide SSH", five_guides),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
