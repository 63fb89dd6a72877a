use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spdc_lattice::commands::{cmd_compare, cmd_modes, cmd_spectrum, cmd_sweep};
use spdc_lattice::config::{Overrides, RunConfig};
use spdc_lattice::spectrum::Solver;

#[derive(Parser)]
#[command(version, about = "SPDC resonance spectra of disordered waveguide arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML config, or a manifest.json from an earlier run.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for ensembles (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// closed_form | ode
    #[arg(long, global = true)]
    solver: Option<Solver>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Disorder-free and disordered resonance spectra.
    Spectrum,
    /// Ensemble statistics against disorder strength.
    Sweep,
    /// Supermode spectrum and localized-mode diagnostics.
    Modes,
    /// Side-by-side statistics of several geometries.
    Compare,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let loaded = match &cli.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    };
    let result = loaded.and_then(|mut cfg| {
        cfg.apply(&Overrides {
            seed: cli.seed,
            threads: cli.threads,
            output_dir: cli.out.clone(),
            solver: cli.solver,
        })?;
        match cli.command {
            Command::Spectrum => cmd_spectrum(&cfg),
            Command::Sweep => cmd_sweep(&cfg),
            Command::Modes => cmd_modes(&cfg),
            Command::Compare => cmd_compare(&cfg),
        }
    });
    match result {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            for f in &out.files {
                println!("{}", f.display());
            }
            println!("{}", out.manifest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
