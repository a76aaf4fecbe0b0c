use std::thread;

use super::config::{Experiment, ExperimentConfig};
use super::report::{CheckOutcome, ExperimentReport, RunArtifact, RunSummary};
use super::table::{Table, TRAJECTORY_COLUMNS};
use crate::analysis::expectation_in_region;
use crate::evolution::{
    run_adiabatic_sweep, EvolveOptions, Evolver, Method, NoiseModel, RunRequest, ScheduleKind, StepRecord, SweepPoint,
    SweepSettings, Target, Trajectory,
};
use crate::lattice::{initial_state, InitialKind, Ket, ModelSpec, StateVector};
use crate::{Error, Result};

/// Width, in time units, of the averaging windows in the fixed-point check.
pub const SMOOTHING_WINDOW: f64 = 5.0;
pub const FIXED_POINT_THRESHOLD: f64 = 0.99;
pub const FIG1_RUNS: u64 = 5;
/// Outer sites per side watched for boundary reflections.
pub const EDGE_SITES: usize = 2;
pub const EDGE_AMPLITUDE_LIMIT: f64 = 1e-3;

/// `(cooling floor, adiabatic ceiling)` of a panel.
pub fn fig2_thresholds(experiment: Experiment) -> Option<(f64, f64)> {
    match experiment {
        Experiment::Fig2a => Some((0.94, 0.35)),
        Experiment::Fig2b => Some((0.85, 0.24)),
        _ => None,
    }
}

/// Dispatches on `config.experiment`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    match config.experiment {
        Experiment::Fig1 => run_fig1(config),
        Experiment::Fig2a | Experiment::Fig2b => run_fig2(config),
        Experiment::Fig3 => run_fig3(config),
        Experiment::Custom => run_custom(config),
    }
}

fn initial_label(kind: InitialKind) -> String {
    match kind {
        InitialKind::Point => "point".into(),
        InitialKind::Spread => "spread".into(),
        InitialKind::Random { seed } => format!("random{seed}"),
    }
}

/// Noise models for a curve: realization `r` of stream `stream` draws from
/// the root seed forked twice.
fn realizations(config: &ExperimentConfig, stream: u64) -> Vec<NoiseModel> {
    if config.epsilon == 0.0 {
        return Vec::new();
    }
    let root = NoiseModel::new(config.epsilon, config.seed).fork(stream);
    (0..config.noise_seeds as u64).map(|r| root.fork(r)).collect()
}

/// Pointwise mean of several trajectories' records.
fn mean_records(runs: &[&Trajectory]) -> Vec<StepRecord> {
    let n = runs.len() as f64;
    (0..runs[0].records.len())
        .map(|k| {
            let rs: Vec<&StepRecord> = runs.iter().map(|t| &t.records[k]).collect();
            let energy = rs.iter().map(|r| r.energy).sum::<Option<f64>>().map(|e| e / n);
            StepRecord {
                step: rs[0].step,
                time: rs[0].time,
                overlap: rs.iter().map(|r| r.overlap).sum::<f64>() / n,
                escaped: rs.iter().all(|r| r.escaped),
                norm: rs.iter().map(|r| r.norm).sum::<f64>() / n,
                interior_probability: rs.iter().map(|r| r.interior_probability).sum::<f64>() / n,
                energy,
            }
        })
        .collect()
}

fn trajectory_artifact(name: String, records: &[StepRecord], threshold: Option<f64>) -> RunArtifact {
    RunArtifact {
        name,
        table: Table::from_records(records),
        summary: Some(RunSummary::from_records(records, threshold)),
    }
}

fn epsilon_label(eps: f64) -> String {
    format!("eps{eps}")
}

/// Means of consecutive windows of `window` samples, dropping a ragged tail.
pub fn block_means(values: &[f64], window: usize) -> Vec<f64> {
    values.chunks_exact(window.max(1)).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect()
}

/// Largest decrease between consecutive values (0 when non-decreasing).
pub fn largest_drop(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
}

/// Norm of the amplitude on the `sites` outermost sites at each end.
pub fn edge_amplitude(psi: &StateVector, sites: usize) -> f64 {
    let sector = psi.sector();
    let l = sector.half_extent() as i64;
    let near_edge = |n: i64| n.abs() > l - sites as i64;
    (0..psi.dim())
        .filter(|&i| match sector.ket(i) {
            Ket::One(n) => near_edge(n),
            Ket::Two(a, b) => near_edge(a) || near_edge(b),
        })
        .map(|i| psi.amplitudes()[i].norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn run_fig1(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let spec = config.spec()?;
    let options = EvolveOptions { time_grid: config.time_grid, keep_states: true };
    let evolver = Evolver::new(&spec, config.schedule, config.method, config.dt, options)?;
    let seeds: Vec<u64> = (0..FIG1_RUNS).map(|i| config.seed + i).collect();
    let requests = seeds
        .iter()
        .enumerate()
        .map(|(i, &seed)| {
            let noise = NoiseModel::new(config.epsilon, config.seed).fork(i as u64);
            Ok(RunRequest { initial: initial_state(&spec, InitialKind::Random { seed })?, noise })
        })
        .collect::<Result<Vec<_>>>()?;
    let runs = evolver.run_batch(&requests, config.steps)?;

    let window = (SMOOTHING_WINDOW / config.dt).round() as usize;
    let t_end = config.duration();
    let mut artifacts = Vec::new();
    let mut checks = Vec::new();
    for (seed, run) in seeds.iter().zip(&runs) {
        artifacts.push(trajectory_artifact(format!("fig1_seed{seed}"), &run.records, Some(FIXED_POINT_THRESHOLD)));
        checks.push(CheckOutcome::above(
            format!("fig1 seed {seed}: O(t={t_end}) > {FIXED_POINT_THRESHOLD}"),
            run.final_overlap(),
            FIXED_POINT_THRESHOLD,
            format!("L = {}", spec.half_extent),
        ));
        let overlaps: Vec<f64> = run.records[1..].iter().map(|r| r.overlap).collect();
        let smoothed = block_means(&overlaps, window);
        checks.push(CheckOutcome::at_most(
            format!("fig1 seed {seed}: O averaged over {SMOOTHING_WINDOW}-unit windows is non-decreasing"),
            largest_drop(&smoothed),
            0.0,
            format!("{} windows", smoothed.len()),
        ));
        let edge = run.states.iter().map(|s| edge_amplitude(s, EDGE_SITES)).fold(0.0, f64::max);
        checks.push(CheckOutcome::at_most(
            format!("fig1 seed {seed}: amplitude on outer {EDGE_SITES} sites"),
            edge,
            EDGE_AMPLITUDE_LIMIT,
            String::new(),
        ));
    }
    Ok(ExperimentReport { config: config.clone(), spec, artifacts, checks })
}

fn sweep_artifact(spec: &ModelSpec, target: &Target, points: &[SweepPoint]) -> Result<RunArtifact> {
    let h = crate::lattice::build_hamiltonian(spec)?;
    let mut table = Table::new(&TRAJECTORY_COLUMNS);
    let mut last_energy = None;
    for p in points {
        let energy = expectation_in_region(&h, &p.final_state, &target.projector)?.value;
        last_energy = energy;
        table.push(vec![p.n_steps.into(), p.final_time.into(), p.overlap.into(), p.norm.into(), energy.into()])?;
    }
    let overlaps = points.iter().map(|p| p.overlap);
    let summary = RunSummary {
        final_overlap: points.last().map_or(0.0, |p| p.overlap),
        max_overlap: overlaps.fold(0.0, f64::max),
        crossing_step: None,
        final_energy: last_energy,
    };
    Ok(RunArtifact { name: "ae_full_point".into(), table, summary: Some(summary) })
}

/// Noiseless and noisy cooling curves for one method, both initial states.
struct CoolingFamily {
    method: Method,
    curves: Vec<(InitialKind, Trajectory, Vec<Trajectory>)>,
}

fn cooling_family(
    config: &ExperimentConfig,
    spec: &ModelSpec,
    target: &Target,
    method: Method,
) -> Result<CoolingFamily> {
    let options = EvolveOptions { time_grid: config.time_grid, keep_states: false };
    let evolver = Evolver::with_target(spec, config.schedule, method, config.dt, options, target.clone())?;
    let initials = [InitialKind::Point, InitialKind::Spread];
    let mut requests = Vec::new();
    let mut layout = Vec::new();
    for (i, &kind) in initials.iter().enumerate() {
        let psi = initial_state(spec, kind)?;
        let stream = 2 * (method as u64) + i as u64;
        let noisy = realizations(config, stream);
        layout.push(noisy.len());
        requests.push(RunRequest { initial: psi.clone(), noise: NoiseModel::silent() });
        requests.extend(noisy.into_iter().map(|noise| RunRequest { initial: psi.clone(), noise }));
    }
    let mut runs = evolver.run_batch(&requests, config.steps)?.into_iter();
    let mut curves = Vec::new();
    for (&kind, &count) in initials.iter().zip(&layout) {
        let clean = runs.next().expect("batch yields one trajectory per request");
        let noisy: Vec<Trajectory> = runs.by_ref().take(count).collect();
        curves.push((kind, clean, noisy));
    }
    Ok(CoolingFamily { method, curves })
}

pub fn run_fig2(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (floor, ceiling) = fig2_thresholds(config.experiment)
        .ok_or_else(|| Error::config(format!("{} is not a cooling-comparison panel", config.experiment.label())))?;
    let spec = config.spec()?;
    let target = Target::compute(&spec)?;
    let point = initial_state(&spec, InitialKind::Point)?;
    let settings = SweepSettings {
        method: Method::Full,
        dt: config.dt,
        max_steps: config.steps,
        noise: NoiseModel::silent(),
        time_grid: config.time_grid,
    };

    let (sweep, families) = thread::scope(|s| {
        let sweep = s.spawn(|| run_adiabatic_sweep(&spec, &target, &point, settings));
        let trotter = s.spawn(|| cooling_family(config, &spec, &target, Method::Trotter));
        let full = cooling_family(config, &spec, &target, Method::Full);
        let sweep = sweep.join().expect("sweep thread panicked");
        let trotter = trotter.join().expect("cooling thread panicked");
        (sweep, [full, trotter])
    });
    let sweep = sweep?;

    let mut artifacts = vec![sweep_artifact(&spec, &target, &sweep)?];
    let mut checks = Vec::new();
    let panel = config.experiment.label();
    for family in families {
        let family = family?;
        let m = family.method.label();
        for (kind, clean, noisy) in &family.curves {
            let i = initial_label(*kind);
            let clean_name = format!("pc_{m}_{i}_eps0");
            let a = trajectory_artifact(clean_name, &clean.records, Some(floor));
            checks.push(CheckOutcome::at_least(
                format!("{panel} PC {m} {i} eps=0: max O over steps <= {}", config.steps),
                a.summary.unwrap().max_overlap,
                floor,
                a.summary.unwrap().crossing_step.map_or("never crossed".into(), |s| format!("crossed at step {s}")),
            ));
            artifacts.push(a);
            if noisy.is_empty() {
                continue;
            }
            let name = format!("pc_{m}_{i}_{}", epsilon_label(config.epsilon));
            let records = if config.average_noise {
                mean_records(&noisy.iter().collect::<Vec<_>>())
            } else {
                noisy[0].records.clone()
            };
            artifacts.push(trajectory_artifact(name, &records, Some(floor)));
            let maxima: Vec<f64> =
                noisy.iter().map(|t| RunSummary::from_records(&t.records, None).max_overlap).collect();
            let worst = maxima.iter().copied().fold(f64::INFINITY, f64::min);
            let passing = maxima.iter().filter(|&&m| m >= floor).count();
            checks.push(CheckOutcome::at_least(
                format!(
                    "{panel} PC {m} {i} eps={}: every noise seed, max O over steps <= {}",
                    config.epsilon, config.steps
                ),
                worst,
                floor,
                format!("{passing}/{} seeds reach it", maxima.len()),
            ));
        }
    }
    let ae_max = artifacts[0].summary.unwrap().max_overlap;
    checks.push(CheckOutcome::at_most(
        format!("{panel} AE max O over N_t <= {}", config.steps),
        ae_max,
        ceiling,
        String::new(),
    ));
    Ok(ExperimentReport { config: config.clone(), spec, artifacts, checks })
}

/// `|psi|` on the interior sites, normalized over the interior.
fn interior_magnitudes(spec: &ModelSpec, psi: &StateVector) -> Result<Vec<f64>> {
    let r = spec.interior_radius as i64;
    let sector = spec.sector();
    let mut out = Vec::new();
    for n1 in -r..=r {
        for n2 in -r..=r {
            let idx = sector.index(Ket::Two(n1, n2)).ok_or_else(|| Error::domain("interior ket missing"))?;
            out.push(psi.amplitudes()[idx].norm());
        }
    }
    let norm = out.iter().map(|m| m * m).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::domain("state has no interior weight"));
    }
    Ok(out.into_iter().map(|m| m / norm).collect())
}

fn grid_overlap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
}

pub fn run_fig3(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let spec = config.spec()?;
    if spec.chains != 2 {
        return Err(Error::config("fig3 needs a two-chain model"));
    }
    let (floor, _) = fig2_thresholds(Experiment::Fig2b).expect("panel b thresholds");
    let target = Target::compute(&spec)?;
    let options = EvolveOptions { time_grid: config.time_grid, keep_states: false };
    let ae_kind = ScheduleKind::Adiabatic { final_time: config.duration() };
    let ae = Evolver::with_target(&spec, ae_kind, Method::Full, config.dt, options, target.clone())?;
    let pc = Evolver::with_target(&spec, config.schedule, Method::Full, config.dt, options, target.clone())?;
    let point = initial_state(&spec, InitialKind::Point)?;
    let start = initial_state(&spec, config.initial)?;
    let noise = NoiseModel::new(config.epsilon, config.seed);
    let (ae_run, pc_run) = thread::scope(|s| {
        let ae_run = s.spawn(|| ae.run(&point, config.steps, NoiseModel::silent()));
        let pc_run = pc.run(&start, config.steps, noise);
        (ae_run.join().expect("adiabatic thread panicked"), pc_run)
    });
    let (ae_run, pc_run) = (ae_run?, pc_run?);

    let exact = interior_magnitudes(&spec, &target.state)?;
    let ae_grid = interior_magnitudes(&spec, &ae_run.final_state)?;
    let pc_grid = interior_magnitudes(&spec, &pc_run.final_state)?;

    let r = spec.interior_radius as i64;
    let mut grids = Table::new(&["n1", "n2", "exact", "ae", "pc"]);
    let mut k = 0;
    for n1 in -r..=r {
        for n2 in -r..=r {
            grids.push(vec![n1.into(), n2.into(), exact[k].into(), ae_grid[k].into(), pc_grid[k].into()])?;
            k += 1;
        }
    }

    let mut checks = vec![CheckOutcome::at_least(
        format!("fig3 PC@{} grid overlap with exact grid", config.steps),
        grid_overlap(&pc_grid, &exact),
        floor,
        format!("AE@{} grid overlap {:.4}", config.steps, grid_overlap(&ae_grid, &exact)),
    )];
    let peak = (0..exact.len()).max_by(|&a, &b| exact[a].total_cmp(&exact[b])).expect("non-empty grid");
    let side = (2 * r + 1) as usize;
    let (p1, p2) = ((peak / side) as i64 - r, (peak % side) as i64 - r);
    let attractive = |n: i64| spec.potential_at(n) < 0.0;
    checks.push(CheckOutcome {
        name: "fig3 exact grid peak lies where both particles feel attraction".into(),
        passed: attractive(p1) && attractive(p2),
        value: exact[peak],
        threshold: 0.0,
        detail: format!("peak at ({p1}, {p2})"),
    });
    let worst_norm = [&exact, &ae_grid, &pc_grid]
        .iter()
        .map(|g| (g.iter().map(|m| m * m).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(CheckOutcome::at_most("fig3 grids normalized over the interior", worst_norm, 1e-12, String::new()));

    let artifacts = vec![
        RunArtifact { name: "fig3_grids".into(), table: grids, summary: None },
        trajectory_artifact(format!("fig3_ae{}", config.steps), &ae_run.records, None),
        trajectory_artifact(format!("fig3_pc{}", config.steps), &pc_run.records, Some(floor)),
    ];
    Ok(ExperimentReport { config: config.clone(), spec, artifacts, checks })
}

/// A single schedule, method and initial state, noiseless or with
/// `noise_seeds` realizations.
pub fn run_custom(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let spec = config.spec()?;
    let options = EvolveOptions { time_grid: config.time_grid, keep_states: false };
    let evolver = Evolver::new(&spec, config.schedule, config.method, config.dt, options)?;
    let psi = initial_state(&spec, config.initial)?;
    let noise = realizations(config, 0);
    let requests: Vec<RunRequest> = if noise.is_empty() {
        vec![RunRequest { initial: psi, noise: NoiseModel::silent() }]
    } else {
        noise.into_iter().map(|noise| RunRequest { initial: psi.clone(), noise }).collect()
    };
    let runs = evolver.run_batch(&requests, config.steps)?;
    let records = if config.average_noise && runs.len() > 1 {
        mean_records(&runs.iter().collect::<Vec<_>>())
    } else {
        runs[0].records.clone()
    };
    let artifacts = vec![trajectory_artifact("run".into(), &records, None)];
    Ok(ExperimentReport { config: config.clone(), spec, artifacts, checks: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothing_helpers() {
        assert_eq!(block_means(&[1.0, 3.0, 2.0, 4.0, 9.0], 2), vec![2.0, 3.0]);
        assert_eq!(largest_drop(&[0.1, 0.5, 0.4, 0.9]), 0.09999999999999998);
        assert_eq!(largest_drop(&[0.1, 0.2]), 0.0);
    }

    #[test]
    fn edge_amplitude_counts_outer_sites() {
        let spec = ModelSpec::model_1a(6, 2);
        let psi = StateVector::basis(spec.sector(), Ket::One(-5)).unwrap();
        assert_eq!(edge_amplitude(&psi, 2), 1.0);
        let inner = StateVector::basis(spec.sector(), Ket::One(4)).unwrap();
        assert_eq!(edge_amplitude(&inner, 2), 0.0);
    }

    #[test]
    fn custom_run_is_reproducible() {
        let mut c = ExperimentConfig::for_experiment(Experiment::Custom);
        c.model.half_extent = 12;
        c.method = Method::Trotter;
        c.steps = 10;
        c.noise_seeds = 2;
        let a = run_custom(&c).unwrap();
        let b = run_custom(&c).unwrap();
        assert_eq!(a.artifacts[0].table.render(), b.artifacts[0].table.render());
        c.seed += 1;
        let d = run_custom(&c).unwrap();
        assert_ne!(a.artifacts[0].table.render(), d.artifacts[0].table.render());
    }

    #[test]
    fn ground_state_is_a_fixed_point() {
        let spec = ModelSpec::model_1a(30, 5);
        let ev = Evolver::new(&spec, ScheduleKind::Static, Method::Full, 0.5, EvolveOptions::default()).unwrap();
        let run = ev.run(&ev.target().state.clone(), 20, NoiseModel::silent()).unwrap();
        assert!(run.records.iter().all(|r| (r.overlap - 1.0).abs() < 1e-12));
    }
}
