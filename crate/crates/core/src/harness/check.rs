use std::fmt;
use std::time::Instant;

use super::config::{Experiment, ExperimentConfig};
use super::figures::run_experiment;
use super::report::{CheckOutcome, ExperimentReport};
use crate::analysis::{count_localized_states, fit_decay_exponent, ground_state, FitOptions, OverlapSeries};
use crate::evolution::{step_full, step_trotter, EvolveOptions, Evolver, Method, NoiseModel, ScheduleKind, Target};
use crate::lattice::{build_hamiltonian, build_projector, initial_state, trotter_parts, InitialKind, ModelSpec};
use crate::lattice::{OperatorTag, SectorOperator};
use crate::qubit::{check_equivalence, EQUIVALENCE_TOL};
use crate::Result;

pub const UNITARITY_TOL: f64 = 1e-10;
pub const TROTTER_CONVERGENCE_RATIO: f64 = 1.8;
pub const COMMUTING_TOL: f64 = 1e-12;
pub const GROUND_ENERGY_TOL: f64 = 1e-4;
pub const FIT_ALPHA_TOL: f64 = 0.1;

/// Runtime budget in seconds for the default configuration of a figure.
pub fn runtime_budget(experiment: Experiment) -> Option<f64> {
    match experiment {
        Experiment::Fig2a => Some(60.0),
        Experiment::Fig2b => Some(300.0),
        _ => None,
    }
}

/// Sector Hamiltonians of the qubit constructions against the lattice
/// models: Model 1A and 1B at `L = 3`, Model 2 at `L = 2`.
pub fn qubit_checks() -> Result<Vec<CheckOutcome>> {
    let cases = [
        ("Model 1A, L = 3", ModelSpec::model_1a(3, 1)),
        ("Model 1B, L = 3", ModelSpec::model_1b(3, 1)),
        ("Model 2, L = 2", ModelSpec::model_2(2, 1)),
    ];
    let mut out = Vec::new();
    for (label, spec) in cases {
        let r = check_equivalence(&spec)?;
        let how = if spec.chains == 1 { "entrywise" } else { "up to an additive identity" };
        let mut outcome = CheckOutcome::at_most(
            format!("qubit sector of {label} equals lattice H {how}"),
            r.max_deviation(),
            EQUIVALENCE_TOL,
            format!("shift {:+.6}", r.shift),
        );
        outcome.passed = r.passed();
        out.push(outcome);
        if spec.chains == 2 {
            let worst = r.parts.iter().filter(|p| p.exact).map(|p| p.raw_deviation).fold(0.0, f64::max);
            out.push(CheckOutcome::at_most(
                format!("qubit sector of {label}: hopping, V and W parts exact"),
                worst,
                EQUIVALENCE_TOL,
                String::new(),
            ));
        }
    }
    Ok(out)
}

pub fn oracle_checks() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let e0 = ground_state(&build_hamiltonian(&ModelSpec::model_1a(200, 5))?)?.ground_energy();
    let expected = 1.0 - 2f64.sqrt();
    out.push(CheckOutcome::at_most(
        "Model 1A ground energy at L = 200 matches 1 - sqrt(2)",
        (e0 - expected).abs(),
        GROUND_ENERGY_TOL,
        format!("E0 = {e0}"),
    ));
    let census = |spec: &ModelSpec| -> Result<usize> {
        Ok(count_localized_states(&build_hamiltonian(spec)?, &build_projector(spec)?)?.count)
    };
    let exact = |name: &str, found: usize, expected: usize| CheckOutcome {
        name: name.into(),
        passed: found == expected,
        value: found as f64,
        threshold: expected as f64,
        detail: String::new(),
    };
    out.push(exact("Model 1B has exactly 4 bound states", census(&ModelSpec::model_1b(25, 5))?, 4));
    out.push(exact("Model 2 has exactly 4 localized states", census(&ModelSpec::model_2(25, 5))?, 4));
    let scaled = census(&ModelSpec::model_1b(25, 5).with_kinetic_scale(10.0))?;
    out.push(CheckOutcome::at_most("Model 1B at kinetic scale 10 has at most 1", scaled as f64, 1.0, String::new()));
    Ok(out)
}

fn worst_step_norm_drift(spec: &ModelSpec, method: Method, dt: f64, steps: usize) -> Result<f64> {
    let ev = Evolver::new(spec, ScheduleKind::projected_cooling(), method, dt, EvolveOptions::default())?;
    let run = ev.run(&initial_state(spec, InitialKind::Spread)?, steps, NoiseModel::silent())?;
    Ok(run.records.windows(2).map(|w| (w[1].norm / w[0].norm - 1.0).abs()).fold(0.0, f64::max))
}

fn trotter_deviation(spec: &ModelSpec, target: &Target, dt: f64, steps: usize) -> Result<f64> {
    let psi = initial_state(spec, InitialKind::Point)?;
    let run = |method| -> Result<_> {
        let ev = Evolver::with_target(
            spec,
            ScheduleKind::projected_cooling(),
            method,
            dt,
            EvolveOptions::default(),
            target.clone(),
        )?;
        Ok(ev.run(&psi, steps, NoiseModel::silent())?.final_state)
    };
    run(Method::Full)?.distance(&run(Method::Trotter)?)
}

pub fn stepper_checks() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let cases = [("Model 1B", ModelSpec::model_1b(25, 5)), ("Model 2 at L = 8", ModelSpec::model_2(8, 3))];
    for (label, spec) in &cases {
        for method in Method::ALL {
            out.push(CheckOutcome::at_most(
                format!("{} stepper unitary per step on {label}", method.label()),
                worst_step_norm_drift(spec, method, 0.3, 40)?,
                UNITARITY_TOL,
                String::new(),
            ));
        }
    }

    let spec = ModelSpec::model_1b(25, 5);
    let target = Target::compute(&spec)?;
    let coarse = trotter_deviation(&spec, &target, 0.3, 40)?;
    let fine = trotter_deviation(&spec, &target, 0.15, 80)?;
    out.push(CheckOutcome::at_least(
        "Trotter-vs-full deviation on Model 1B shrinks when dt halves (total time 12)",
        coarse / fine,
        TROTTER_CONVERGENCE_RATIO,
        format!("deviation {coarse:.3e} at dt 0.3, {fine:.3e} at dt 0.15"),
    ));

    let spec = ModelSpec::model_2(6, 2);
    let diagonal: Vec<SectorOperator> = trotter_parts(&spec)?
        .into_iter()
        .filter(|p| matches!(p.tag(), OperatorTag::KineticDiagonal | OperatorTag::Potential | OperatorTag::Coupling))
        .collect();
    let refs: Vec<&SectorOperator> = diagonal.iter().collect();
    let sum = SectorOperator::sum(OperatorTag::Composite, &refs)?;
    let psi = initial_state(&spec, InitialKind::Random { seed: 3 })?;
    let split = step_trotter(&psi, &diagonal, 0.3)?;
    let joint = step_full(&psi, &sum, 0.3)?;
    out.push(CheckOutcome::at_most(
        "product formula equals exact step when all parts commute",
        split.distance(&joint)?,
        COMMUTING_TOL,
        String::new(),
    ));
    Ok(out)
}

pub fn fitter_checks() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (alpha, amp, omega) in [(1.0, 0.3, 5.0), (1.5, 0.2, 3.0), (0.7, 0.4, 1.3)] {
        let times: Vec<f64> = (1..=2000).map(|k| k as f64 * 0.05).collect();
        let overlaps = times.iter().map(|&t: &f64| 1.0 - (1.0 + amp * (omega * t).sin()) * t.powf(-alpha)).collect();
        let fit = fit_decay_exponent(&OverlapSeries::new(times, overlaps)?, FitOptions::default())?;
        out.push(CheckOutcome::at_most(
            format!("decay fit recovers alpha = {alpha} under a {amp} oscillation at frequency {omega}"),
            (fit.alpha - alpha).abs(),
            FIT_ALPHA_TOL,
            format!("alpha = {:.4}", fit.alpha),
        ));
    }
    Ok(out)
}

fn rendered(report: &ExperimentReport) -> Result<Vec<(String, String)>> {
    let mut files: Vec<(String, String)> = report.artifacts.iter().map(|a| (a.file_name(), a.table.render())).collect();
    files.push(("manifest.toml".into(), report.manifest()?));
    Ok(files)
}

/// Runs fixed configs twice and compares every emitted file byte for byte.
pub fn determinism_checks() -> Result<Vec<CheckOutcome>> {
    let mut noisy = ExperimentConfig::for_experiment(Experiment::Custom);
    noisy.method = Method::Trotter;
    noisy.seed = 7;
    noisy.noise_seeds = 3;
    noisy.average_noise = true;
    let mut out = Vec::new();
    for (label, config) in [("fig2a", ExperimentConfig::fig2a()), ("noisy custom run", noisy)] {
        let a = rendered(&run_experiment(&config)?)?;
        let b = rendered(&run_experiment(&config)?)?;
        let differing = a.iter().zip(&b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len());
        out.push(CheckOutcome {
            name: format!("repeated {label} produces byte-identical files"),
            passed: differing == 0,
            value: differing as f64,
            threshold: 0.0,
            detail: format!("{} files compared", a.len()),
        });
    }
    Ok(out)
}

/// Runs a figure with its default config and appends a runtime check when
/// the figure has a budget.
pub fn figure_checks(experiment: Experiment) -> Result<(ExperimentReport, Vec<CheckOutcome>)> {
    let config = ExperimentConfig::for_experiment(experiment);
    let start = Instant::now();
    let report = run_experiment(&config)?;
    let seconds = start.elapsed().as_secs_f64();
    let mut checks = report.checks.clone();
    if let Some(budget) = runtime_budget(experiment) {
        checks.push(CheckOutcome::at_most(
            format!("{} runtime in seconds", experiment.label()),
            seconds,
            budget,
            String::new(),
        ));
    }
    Ok((report, checks))
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub sections: Vec<(String, Vec<CheckOutcome>)>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|(_, c)| c.iter().all(|c| c.passed))
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.sections.iter().flat_map(|(_, c)| c).filter(|c| !c.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (section, checks) in &self.sections {
            writeln!(f, "== {section}")?;
            for c in checks {
                writeln!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

/// Every suite; figure reproductions are included when `figures` is set.
/// `progress` sees each section as soon as it finishes.
pub fn check_all(figures: bool, mut progress: impl FnMut(&str, &[CheckOutcome])) -> Result<CheckReport> {
    let mut sections = Vec::new();
    let mut record = |name: &str, checks: Vec<CheckOutcome>| {
        progress(name, &checks);
        sections.push((name.to_string(), checks));
    };
    record("qubit equivalence", qubit_checks()?);
    record("oracles", oracle_checks()?);
    record("steppers", stepper_checks()?);
    record("decay fit", fitter_checks()?);
    record("determinism", determinism_checks()?);
    if figures {
        for e in [Experiment::Fig1, Experiment::Fig2a, Experiment::Fig2b, Experiment::Fig3] {
            record(e.label(), figure_checks(e)?.1);
        }
    }
    Ok(CheckReport { sections })
}
