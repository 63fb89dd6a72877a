macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(single_guide_sinc, "single_guide_sinc.rs", single_guide_sinc_runs);
example!(pump_discrete_diffraction, "pump_discrete_diffraction.rs", pump_discrete_diffraction_runs);
example!(ssh_zero_mode, "ssh_zero_mode.rs", ssh_zero_mode_runs);
example!(solver_cross_check, "solver_cross_check.rs", solver_cross_check_runs);
example!(resonance_spectra, "resonance_spectra.rs", resonance_spectra_runs);
example!(disorder_sweep, "disorder_sweep.rs", disorder_sweep_runs);
example!(geometry_comparison, "geometry_comparison.rs", geometry_comparison_runs);
example!(config_pipeline, "config_pipeline.rs", config_pipeline_runs);
