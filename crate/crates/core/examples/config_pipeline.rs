// Drives the file-producing pipeline from a TOML config, the same path the
// `spdc-lattice` binary takes.

use spdc_lattice::commands::{cmd_compare, cmd_modes};
use spdc_lattice::config::RunConfig;
use spdc_lattice::Result;

const CONFIG: &str = r#"
[lattice]
geometry = "ssh"
n_guides = 13
mean_coupling = 2.5
dimerization = 0.5

[disorder]
strengths = [0.0, 0.2, 0.4]
realizations = 20

[run]
seed = 2024
"#;

pub fn run_example() -> Result<()> {
    let mut cfg = RunConfig::from_toml_str(CONFIG)?;
    cfg.run.output_dir = std::env::temp_dir().join(format!("spdc-lattice-example-{}", std::process::id()));
    for out in [cmd_modes(&cfg)?, cmd_compare(&cfg)?] {
        for f in out.files {
            println!("wrote {}", f.display());
        }
    }
    std::fs::remove_dir_all(&cfg.run.output_dir).ok();
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
