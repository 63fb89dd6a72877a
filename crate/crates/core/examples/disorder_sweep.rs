// Ensemble statistics against disorder strength for one geometry.
// Pass `homogeneous`, `trivial_mode` or `ssh` as the first argument.

use spdc_lattice::prelude::*;

fn sweep_table(geometry: Geometry, realizations: usize) -> Result<()> {
    let spec = LatticeSpec::reference(geometry);
    let grid = SpectrumGrid::default_for(spec.mean_coupling);
    let strengths = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
    let sweep = disorder_sweep(&spec, &strengths, realizations, 2024, &grid, &WavelengthMap::default())?;

    println!("{} array, {} realizations per strength", geometry.label(), sweep.n_realizations);
    println!("disorder  overlap        shift std (nm)");
    for row in &sweep.rows {
        println!(
            "{:>8.2}  {:.4} ± {:.4}  {:.4}",
            row.disorder, row.overlap_mean, row.overlap_std, row.shift_std_nm
        );
    }
    if let Some(check) = sweep.cross_check {
        println!("RK4 cross-check: {:.1e}", check.max_relative_deviation);
    }
    Ok(())
}

pub fn run_example() -> Result<()> {
    sweep_table(Geometry::Ssh, 40)
}

#[allow(dead_code)]
fn main() {
    let geometry = std::env::args()
        .nth(1)
        .map(|g| g.parse::<Geometry>())
        .transpose()
        .unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(2);
        })
        .unwrap_or(Geometry::Homogeneous);
    if let Err(e) = sweep_table(geometry, 300) {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
