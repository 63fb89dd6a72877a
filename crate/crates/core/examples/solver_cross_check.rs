// The RK4 integrator and the supermode expansion solve the same equations;
// on a disordered array they agree to well below 1e-6.

use spdc_lattice::dynamics::{default_steps, integrate_biphoton_with, OdeOptions};
use spdc_lattice::prelude::*;

pub fn run_example() -> Result<()> {
    for geometry in [Geometry::Homogeneous, Geometry::TrivialMode, Geometry::Ssh] {
        let nominal = build_lattice(&LatticeSpec::reference(geometry))?;
        let lat = apply_disorder(&nominal, &DisorderSpec::new(0.4, 1, 0))?;
        let model = SupermodeModel::new(&lat);
        let mut worst: f64 = 0.0;
        for d in [-12.0, -6.0, -1.0, 0.0, 2.5, 9.0] {
            let exact = model.biphoton(DetuneValue(d));
            let ode = integrate_biphoton_with(&lat, DetuneValue(d), &OdeOptions::default())?;
            worst = worst.max(exact.relative_deviation(&ode));
        }
        println!(
            "{:<12} steps {:>5}  max relative deviation {worst:.2e}",
            geometry.label(),
            default_steps(&lat, 12.0)
        );
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
