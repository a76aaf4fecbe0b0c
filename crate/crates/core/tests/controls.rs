use projcool_core::evolution::{
    apply_noise, step_full, step_trotter, EvolveOptions, Evolver, Method, NoiseModel, ScheduleKind, Target,
};
use projcool_core::harness::{run_experiment, Experiment, ExperimentConfig};
use projcool_core::lattice::{initial_state, trotter_parts, InitialKind, ModelSpec, OperatorTag};

#[test]
fn noise_grows_squared_norm_by_one_plus_eps_squared() {
    let spec = ModelSpec::model_1a(10, 3);
    let psi = initial_state(&spec, InitialKind::Random { seed: 4 }).unwrap();
    let eps = 0.05;
    let trials = 10_000;
    let ratios: Vec<f64> = (0..trials)
        .map(|k| apply_noise(&psi, &NoiseModel::new(eps, 100).fork(k)).norm_sqr() / psi.norm_sqr())
        .collect();
    let mean = ratios.iter().sum::<f64>() / trials as f64;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let stderr = (var / trials as f64).sqrt();
    assert!((mean - (1.0 + eps * eps)).abs() < 3.0 * stderr, "mean {mean}, stderr {stderr}");
}

#[test]
fn trotter_applies_factors_right_to_left() {
    for spec in [ModelSpec::model_1b(8, 3), ModelSpec::model_2(4, 2)] {
        let parts = trotter_parts(&spec).unwrap();
        let psi = initial_state(&spec, InitialKind::Random { seed: 2 }).unwrap();
        let dt = 0.3;
        let mut reference = psi.clone();
        for part in parts.iter().rev() {
            reference = step_full(&reference, part, dt).unwrap();
        }
        let stepped = step_trotter(&psi, &parts, dt).unwrap();
        assert!(stepped.distance(&reference).unwrap() < 1e-12);

        let mut permuted = parts.clone();
        let v = permuted.iter().position(|p| p.tag() == OperatorTag::Potential).unwrap();
        let moved = permuted.remove(v);
        permuted.insert(0, moved);
        assert!(step_trotter(&psi, &permuted, dt).unwrap().distance(&stepped).unwrap() > 1e-6);
    }
}

#[test]
fn corrupted_well_fails_model_1b_thresholds() {
    let mut config = ExperimentConfig::fig2a();
    config.epsilon = 0.0;
    assert!(run_experiment(&config).unwrap().passed());
    config.model.preset = None;
    config.model.chains = Some(1);
    config.model.potential = Some(vec![(0, -1.6), (2, -1.5), (3, -1.5), (-2, 1.4)]);
    let report = run_experiment(&config).unwrap();
    assert!(!report.passed());
    assert!(report.checks.iter().any(|c| !c.passed && c.name.contains("PC")));
}

#[test]
fn unfixed_noise_seed_changes_tables() {
    let mut a = ExperimentConfig::for_experiment(Experiment::Custom);
    a.epsilon = 0.05;
    let mut b = a.clone();
    b.seed = a.seed + 1;
    let render = |c: &ExperimentConfig| run_experiment(c).unwrap().artifacts[0].table.render();
    assert_eq!(render(&a), render(&a));
    assert_ne!(render(&a), render(&b));
}

#[test]
fn ground_state_initial_gives_unit_overlap() {
    let spec = ModelSpec::model_1a(25, 5);
    let target = Target::compute(&spec).unwrap();
    for method in Method::ALL {
        let ev =
            Evolver::with_target(&spec, ScheduleKind::Static, method, 0.3, EvolveOptions::default(), target.clone())
                .unwrap();
        let run = ev.run(&target.state, 40, NoiseModel::silent()).unwrap();
        let worst = run.records.iter().map(|r| (r.overlap - 1.0).abs()).fold(0.0, f64::max);
        match method {
            Method::Full => assert!(worst < 1e-10, "{worst}"),
            Method::Trotter => assert!(worst < 5e-2, "{worst}"),
        }
    }
}
