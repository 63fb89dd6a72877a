// A lone χ⁽²⁾ guide: the resonance spectrum is the sinc² phase-matching
// line, with zeros where Δβ⁰L/2 = ±π.

use spdc_lattice::prelude::*;

pub fn run_example() -> Result<()> {
    let lat = build_lattice(&LatticeSpec {
        n_guides: 1,
        ..LatticeSpec::reference(Geometry::Homogeneous)
    })?;
    let half_width = 2.0 * std::f64::consts::PI / lat.length;

    println!("detune (1/mm)   |Psi|    sinc");
    for k in -8..=8 {
        let d = 0.25 * half_width * k as f64;
        let psi = integrate_biphoton(&lat, DetuneValue(d))?.central().norm();
        let x = d * lat.length / 2.0;
        let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
        println!("{d:>12.4}  {psi:>8.5}  {:>8.5}", lat.spdc_gain * lat.length * sinc.abs());
    }

    let grid = SpectrumGrid::uniform(-10.0, 10.0, 401)?;
    let s = resonance_spectrum(&lat, &grid, Solver::ClosedForm)?;
    println!("peak at {:.2e} 1/mm", s.peak_detune);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
