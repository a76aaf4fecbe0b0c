use std::fs;
use std::io::Write;
use std::sync::Mutex;

use projcool_core::harness::{
    determinism_checks, figure_checks, fitter_checks, oracle_checks, qubit_checks, run_experiment, stepper_checks,
    CheckOutcome, Experiment, ExperimentConfig,
};

// One core is shared by every criterion and two of them carry runtime budgets.
static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(number: u32, title: &str, checks: &[CheckOutcome]) {
    for c in checks {
        println!("    {c}");
    }
    let failed: Vec<&CheckOutcome> = checks.iter().filter(|c| !c.passed).collect();
    let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
    // Bypasses libtest's capture so every verdict reaches the log.
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "\ncriterion {number} {verdict}: {title} ({}/{} checks pass)",
        checks.len() - failed.len(),
        checks.len()
    )
    .unwrap();
    drop(out);
    assert!(
        failed.is_empty(),
        "criterion {number} failed: {}",
        failed.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
    );
}

fn lock() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

#[test]
fn criterion_1_model_1b_curve_family() {
    let _g = lock();
    let (_, checks) = figure_checks(Experiment::Fig2a).unwrap();
    criterion(1, "Model 1B: PC variants reach 0.94 within 40 steps, AE stays at or below 0.35, under 60 s", &checks);
}

#[test]
fn criterion_2_model_2_curve_family() {
    let _g = lock();
    let (_, checks) = figure_checks(Experiment::Fig2b).unwrap();
    criterion(2, "Model 2: PC variants reach 0.85 within 40 steps, AE stays at or below 0.24, under 300 s", &checks);
}

#[test]
fn criterion_3_fixed_point() {
    let _g = lock();
    let (_, checks) = figure_checks(Experiment::Fig1).unwrap();
    criterion(3, "Model 1A: five random initial states exceed 0.99 at t = 50 with non-decreasing smoothed O", &checks);
}

#[test]
fn criterion_4_oracles() {
    let _g = lock();
    criterion(4, "ground energy and bound-state census oracles", &oracle_checks().unwrap());
}

#[test]
fn criterion_5_qubit_equivalence() {
    let _g = lock();
    criterion(
        5,
        "qubit Hamiltonians restricted to the particle sector match the lattice models",
        &qubit_checks().unwrap(),
    );
}

#[test]
fn criterion_6_stepper_properties() {
    let _g = lock();
    criterion(6, "unitarity, Trotter convergence and commuting-part exactness", &stepper_checks().unwrap());
}

#[test]
fn criterion_7_determinism() {
    let _g = lock();
    let mut checks = determinism_checks().unwrap();
    let mut config = ExperimentConfig::fig2a();
    config.seed = 11;
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let written: Vec<_> = dirs.iter().map(|d| run_experiment(&config).unwrap().write(d.path()).unwrap()).collect();
    let mut differing = 0;
    for (a, b) in written[0].iter().zip(&written[1]) {
        assert_eq!(a.file_name(), b.file_name());
        if fs::read(a).unwrap() != fs::read(b).unwrap() {
            differing += 1;
        }
    }
    checks.push(CheckOutcome {
        name: "fig2a written twice to disk gives byte-identical files".into(),
        passed: differing == 0 && written[0].len() == written[1].len(),
        value: differing as f64,
        threshold: 0.0,
        detail: format!("{} files compared", written[0].len()),
    });
    criterion(7, "repeated runs of fixed configs give byte-identical tables", &checks);
}

#[test]
fn criterion_8_decay_fit() {
    let _g = lock();
    criterion(8, "decay-exponent fit recovers alpha within 0.1 on synthetic series", &fitter_checks().unwrap());
}
