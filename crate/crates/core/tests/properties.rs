use proptest::prelude::*;
use spdc_lattice::prelude::*;

fn geometry() -> impl Strategy<Value = Geometry> {
    prop_oneof![Just(Geometry::Homogeneous), Just(Geometry::TrivialMode), Just(Geometry::Ssh)]
}

fn spec() -> impl Strategy<Value = LatticeSpec> {
    (geometry(), 0usize..8, 0.5f64..4.0).prop_map(|(g, half, c)| {
        let mut s = LatticeSpec::reference(g);
        s.n_guides = 2 * half + 1;
        s.mean_coupling = c;
        if g == Geometry::TrivialMode {
            s.defect_detune = 2.0 * c;
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn disorder_keeps_couplings_in_band(s in spec(), strength in 0.0f64..0.99, seed: u64, idx: u64) {
        let nominal = build_lattice(&s).unwrap();
        let lat = apply_disorder(&nominal, &DisorderSpec::new(strength, seed, idx)).unwrap();
        for (c, c0) in lat.couplings_spdc.iter().zip(&nominal.couplings_spdc) {
            prop_assert!(*c >= c0 * (1.0 - strength) - 1e-12);
            prop_assert!(*c <= c0 * (1.0 + strength) + 1e-12);
        }
        for (p, c) in lat.couplings_pump.iter().zip(&lat.couplings_spdc) {
            prop_assert!((p - s.pump_ratio * c).abs() < 1e-12);
        }
        prop_assert_eq!(&lat.detunings, &nominal.detunings);
    }

    #[test]
    fn disorder_is_a_pure_function_of_its_seed(s in spec(), seed: u64, idx: u64) {
        let nominal = build_lattice(&s).unwrap();
        let a = apply_disorder(&nominal, &DisorderSpec::new(0.4, seed, idx)).unwrap();
        let b = apply_disorder(&nominal, &DisorderSpec::new(0.4, seed, idx)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn overlap_tensor_is_symmetric(s in spec(), seed: u64) {
        let lat = apply_disorder(&build_lattice(&s).unwrap(), &DisorderSpec::new(0.3, seed, 0)).unwrap();
        let gamma = overlap_tensor(&eigendecompose(&lat, Field::Pump), &eigendecompose(&lat, Field::Spdc)).unwrap();
        let n = lat.n_guides();
        for q in 0..n {
            for a in 0..n {
                for b in 0..n {
                    prop_assert!((gamma.get(q, a, b) - gamma.get(q, b, a)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn biphoton_is_symmetric(s in spec(), seed: u64, d in -10.0f64..10.0) {
        let lat = apply_disorder(&build_lattice(&s).unwrap(), &DisorderSpec::new(0.3, seed, 1)).unwrap();
        let psi = closed_form_biphoton(&lat, DetuneValue(d)).psi;
        prop_assert!((&psi - psi.transpose()).iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn overlap_is_symmetric_and_bounded(seed_a: u64, seed_b: u64, strength in 0.0f64..0.6) {
        let nominal = build_lattice(&LatticeSpec { n_guides: 7, ..LatticeSpec::reference(Geometry::Homogeneous) }).unwrap();
        let grid = SpectrumGrid::uniform(-15.0, 15.0, 121).unwrap();
        let spectrum = |seed| {
            let lat = apply_disorder(&nominal, &DisorderSpec::new(strength, seed, 0)).unwrap();
            resonance_spectrum(&lat, &grid, Solver::ClosedForm).unwrap()
        };
        let (a, b) = (spectrum(seed_a), spectrum(seed_b));
        let ab = spectral_overlap(&a, &b).unwrap();
        let ba = spectral_overlap(&b, &a).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - ba).abs() < 1e-14);
        prop_assert!((spectral_overlap(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }
}
