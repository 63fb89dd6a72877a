use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid disorder strength {0}: must lie in [0, 1)")]
    InvalidDisorder(f64),

    #[error("invalid spectrum grid: {0}")]
    InvalidGrid(String),

    #[error("spectra were sampled on different grids")]
    GridMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("pump norm drifted by {drift:.3e} (tolerance {tolerance:.1e})")]
    NormDrift { drift: f64, tolerance: f64 },

    #[error(
        "RK4 not converged: doubling the step count changed |psi_00| by {change:.3e} \
         (tolerance {tolerance:.1e})"
    )]
    NotConverged { change: f64, tolerance: f64 },

    #[error(
        "solver cross-check failed for realization {realization}: relative deviation {deviation:.3e}"
    )]
    SolverMismatch { realization: usize, deviation: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NormDrift { .. }
            | Error::NotConverged { .. }
            | Error::SolverMismatch { .. } => 3,
            Error::Io { .. } => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
