use std::collections::BTreeMap;

use approx::assert_relative_eq;
use proptest::prelude::*;

use projcool_core::analysis::normalized_overlap;
use projcool_core::evolution::{step_full, step_trotter, Method, ScheduleKind};
use projcool_core::harness::{Cell, Experiment, ExperimentConfig, Table};
use projcool_core::lattice::{
    build_hamiltonian, initial_state, trotter_parts, Coupling, InitialKind, ModelSpec, OperatorTag, SectorOperator,
};
use projcool_core::qubit::{check_equivalence, EQUIVALENCE_TOL};
use projcool_core::C64;

fn single_chain(half_extent: usize, potential: &[f64]) -> ModelSpec {
    let mut spec = ModelSpec::model_1a(half_extent, 1);
    let r = (potential.len() / 2) as i64;
    spec.potential = potential.iter().enumerate().map(|(i, &v)| (i as i64 - r, v)).collect::<BTreeMap<_, _>>();
    spec
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn config_round_trips(
        dt in 0.01f64..1.0,
        steps in 1usize..200,
        epsilon in 0.0f64..0.2,
        seed in any::<u64>(),
        trotter in any::<bool>(),
        tau in 0.5f64..10.0,
    ) {
        let mut c = ExperimentConfig::for_experiment(Experiment::Custom);
        c.dt = dt;
        c.steps = steps;
        c.epsilon = epsilon;
        c.seed = seed;
        c.method = if trotter { Method::Trotter } else { Method::Full };
        c.schedule = ScheduleKind::ProjectedCooling { kappa: 10.0, tau };
        let back = ExperimentConfig::from_toml_str(&c.to_toml_string().unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn table_round_trips(rows in prop::collection::vec((any::<i64>(), any::<f64>(), prop::option::of(-1e300f64..1e300)), 0..20)) {
        let mut t = Table::new(&["a", "b", "c"]);
        for (a, b, c) in rows {
            let b = if b.is_finite() { Cell::Real(b) } else { Cell::Missing };
            t.push(vec![a.into(), b, c.into()]).unwrap();
        }
        let parsed = Table::parse(&t.render()).unwrap();
        prop_assert_eq!(parsed.render(), t.render());
    }

    #[test]
    fn overlap_ignores_scale_and_phase(seed in any::<u64>(), scale in 0.01f64..100.0, phase in 0.0f64..6.3) {
        let spec = ModelSpec::model_1b(8, 3);
        let x = initial_state(&spec, InitialKind::Random { seed }).unwrap();
        let y = initial_state(&spec, InitialKind::Random { seed: seed ^ 1 }).unwrap();
        let mut z = y.clone();
        z.scale(C64::from_polar(scale, phase));
        let a = normalized_overlap(&x, &y).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
        assert_relative_eq!(a, normalized_overlap(&x, &z).unwrap(), epsilon = 1e-12);
        assert_relative_eq!(normalized_overlap(&z, &z).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn both_steppers_are_unitary(seed in any::<u64>(), dt in 0.0f64..2.0, v in prop::collection::vec(-2.0f64..2.0, 5)) {
        let spec = single_chain(10, &v);
        let h = build_hamiltonian(&spec).unwrap();
        let parts = trotter_parts(&spec).unwrap();
        let psi = initial_state(&spec, InitialKind::Random { seed }).unwrap();
        assert_relative_eq!(step_full(&psi, &h, dt).unwrap().norm(), psi.norm(), max_relative = 1e-10);
        assert_relative_eq!(step_trotter(&psi, &parts, dt).unwrap().norm(), psi.norm(), max_relative = 1e-10);
    }

    #[test]
    fn trotter_parts_sum_to_hamiltonian(scale in 0.1f64..10.0, w in -2.0f64..2.0, v in prop::collection::vec(-2.0f64..2.0, 5)) {
        let mut spec = single_chain(4, &v).with_kinetic_scale(scale);
        spec.allow_reduced_kinetic = true;
        spec.chains = 2;
        spec.coupling = Some(Coupling::Contact { strength: w });
        let parts = trotter_parts(&spec).unwrap();
        let refs: Vec<&SectorOperator> = parts.iter().collect();
        let sum = SectorOperator::sum(OperatorTag::Composite, &refs).unwrap();
        prop_assert!(sum.max_abs_diff(&build_hamiltonian(&spec).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn qubit_sector_matches_random_single_chain(scale in 0.2f64..5.0, v in prop::collection::vec(-3.0f64..3.0, 5)) {
        let mut spec = single_chain(3, &v).with_kinetic_scale(scale);
        spec.allow_reduced_kinetic = true;
        let r = check_equivalence(&spec).unwrap();
        prop_assert!(r.passed(), "{}", r);
        prop_assert!(r.raw_deviation <= EQUIVALENCE_TOL);
    }

    #[test]
    fn qubit_sector_matches_random_two_chain(w in -2.0f64..2.0, v in prop::collection::vec(-3.0f64..3.0, 3)) {
        let mut spec = single_chain(2, &v);
        spec.chains = 2;
        spec.coupling = Some(Coupling::Contact { strength: w });
        let r = check_equivalence(&spec).unwrap();
        prop_assert!(r.passed(), "{}", r);
        assert_relative_eq!(r.shift, -1.0, epsilon = 1e-12);
    }
}
