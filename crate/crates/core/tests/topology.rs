use spdc_lattice::prelude::*;
use spdc_lattice::supermodes::{bulk_gap, mode_table};

fn reference(geometry: Geometry, n: usize) -> Lattice {
    build_lattice(&LatticeSpec {
        n_guides: n,
        ..LatticeSpec::reference(geometry)
    })
    .unwrap()
}

#[test]
fn overlap_tensor_obeys_mirror_parity() {
    // Every mode of the mirror-symmetric chain is even or odd about the
    // centre, so Γ vanishes when the three parities multiply to −1.
    let lat = reference(Geometry::Ssh, 9);
    let pump = eigendecompose(&lat, Field::Pump);
    let spdc = eigendecompose(&lat, Field::Spdc);
    let gamma = overlap_tensor(&pump, &spdc).unwrap();
    let n = lat.n_guides();
    let parity = |basis: &SupermodeBasis, m: usize| {
        let v = basis.mode(m);
        let mirrored: Vec<f64> = v.iter().rev().cloned().collect();
        let same: f64 = v.iter().zip(&mirrored).map(|(a, b)| a * b).sum();
        same.signum()
    };
    for q in 0..n {
        for a in 0..n {
            for b in 0..n {
                let p = parity(&pump, q) * parity(&spdc, a) * parity(&spdc, b);
                if p < 0.0 {
                    assert!(gamma.get(q, a, b).abs() < 1e-12, "Γ[{q}][{a}][{b}]");
                }
            }
        }
    }
}

#[test]
fn homogeneous_modes_are_extended() {
    let lat = reference(Geometry::Homogeneous, 13);
    let basis = eigendecompose(&lat, Field::Spdc);
    for s in mode_table(&basis) {
        assert!(s.participation_ratio >= 13.0 / 2.0, "{s:?}");
    }
}

#[test]
fn ssh_zero_mode_is_central_and_on_one_sublattice() {
    let lat = reference(Geometry::Ssh, 13);
    let d = mode_diagnostics(&eigendecompose(&lat, Field::Spdc), &lat);
    assert!(d.zero_mode_eigenvalue.abs() < 1e-12);
    assert!(d.odd_sublattice_weight < 1e-20);
    assert!((d.central_overlap - 0.8).abs() < 0.01, "{}", d.central_overlap);
    assert!((d.localization_ratio.unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn trivial_defect_mode_sits_above_the_band() {
    let lat = reference(Geometry::TrivialMode, 13);
    let d = mode_diagnostics(&eigendecompose(&lat, Field::Spdc), &lat);
    // Bound state of a single-site defect: λ = √(δ² + 4C²).
    let want = (5.0f64.powi(2) + 4.0 * 2.5f64.powi(2)).sqrt();
    assert!((d.zero_mode_eigenvalue - want).abs() < 1e-3, "{}", d.zero_mode_eigenvalue);
    assert!(d.central_overlap > 0.5);
}

#[test]
fn ssh_gap_stays_open_below_closing() {
    let nominal = reference(Geometry::Ssh, 13);
    for i in 0..300 {
        let lat = apply_disorder(&nominal, &DisorderSpec::new(0.5, 11, i)).unwrap();
        let basis = eigendecompose(&lat, Field::Spdc);
        let d = mode_diagnostics(&basis, &lat);
        let gap = bulk_gap(&basis, d.mode_index).unwrap();
        assert!(gap > 0.0 && d.zero_mode_eigenvalue.abs() < 1e-10, "realization {i}: gap {gap}");
    }
}

#[test]
fn gap_approaches_two_k_c_with_size() {
    let gaps: Vec<f64> = [13, 21, 41, 81]
        .iter()
        .map(|&n| {
            let lat = reference(Geometry::Ssh, n);
            mode_diagnostics(&eigendecompose(&lat, Field::Spdc), &lat).gap.unwrap()
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps.iter().all(|&g| g > 2.5));
    assert!((gaps[3] - 2.5) / 2.5 < 0.01, "{gaps:?}");
}

#[test]
fn pump_modes_scale_with_alpha() {
    let lat = reference(Geometry::Ssh, 9);
    let pump = eigendecompose(&lat, Field::Pump);
    let spdc = eigendecompose(&lat, Field::Spdc);
    for (p, s) in pump.eigenvalues.iter().zip(&spdc.eigenvalues) {
        assert!((p - 0.2 * s).abs() < 1e-12);
    }
}
