// The classical pump launched into the central guide of a wide homogeneous
// array spreads ballistically; |A_n(z)| follows |J_n(2 C_p z)|.

use spdc_lattice::prelude::*;

pub fn run_example() -> Result<()> {
    let lat = build_lattice(&LatticeSpec {
        n_guides: 41,
        ..LatticeSpec::reference(Geometry::Homogeneous)
    })?;
    let cp = lat.couplings_pump[0];
    let zs = [0.5, 1.0, 1.5, 2.0];
    let fields = propagate_pump(&lat, &zs)?;
    let c = lat.central_index();

    println!("C_p = {cp} 1/mm");
    for f in &fields {
        let profile: Vec<String> = (-4..=4)
            .map(|n: i32| format!("{:.3}", f.amplitudes[(c as i32 + n) as usize].norm()))
            .collect();
        println!("z = {:>3} mm  2C_p z = {:>3}  |A_-4..4| = [{}]  norm {:.12}", f.z, 2.0 * cp * f.z, profile.join(" "), f.norm_sqr());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
