//! Photon-pair generation in coupled χ⁽²⁾ waveguide arrays.
//!
//! The crate computes the SPDC resonance spectrum of the central guide of a
//! homogeneous, trivial-defect or SSH array, with two solvers that check each
//! other: a fixed-step RK4 integrator of the coupled-mode equations
//! ([`dynamics`]) and an exact supermode expansion ([`supermodes`]). On top of
//! that sit spectrum post-processing ([`spectrum`]), seeded disorder
//! ensembles ([`ensemble`]) and the file-producing commands behind the
//! `spdc-lattice` binary ([`commands`]).
//!
//! ```
//! use spdc_lattice::prelude::*;
//!
//! let spec = LatticeSpec::reference(Geometry::Ssh);
//! let lat = build_lattice(&spec).unwrap();
//! let grid = SpectrumGrid::default_for(spec.mean_coupling);
//! let s = resonance_spectrum(&lat, &grid, Solver::ClosedForm).unwrap();
//! assert!(s.peak_detune.abs() < 0.1);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod commands;
pub mod config;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod lattice;
pub mod output;
pub mod spectrum;
pub mod supermodes;
pub mod tridiag;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::dynamics::{
        integrate_biphoton, integrate_biphoton_with, propagate_pump, BiphotonState, DetuneValue,
        OdeOptions, PumpField,
    };
    pub use crate::ensemble::{disorder_sweep, run_ensemble, EnsembleStats, SweepResult};
    pub use crate::error::{Error, Result};
    pub use crate::lattice::{
        apply_disorder, build_lattice, DisorderSpec, Field, Geometry, Lattice, LatticeSpec,
    };
    pub use crate::spectrum::{
        detune_to_wavelength, peak_shift, resonance_spectrum, spectral_overlap, Solver, Spectrum,
        SpectrumGrid, WavelengthMap,
    };
    pub use crate::supermodes::{
        closed_form_biphoton, eigendecompose, mode_diagnostics, overlap_tensor, ModeDiagnostics,
        OverlapTensor, SupermodeBasis, SupermodeModel,
    };
}
