use serde::{Deserialize, Serialize};

use super::step::TrotterPropagator;
use super::{NoiseModel, RunMetadata, Schedule, ScheduleKind, StepRecord, Trajectory};
use crate::analysis::{expectation_in_region, ground_state, interior_overlap, SpectralDecomposition};
use crate::lattice::{build_projector, initial_state, InitialKind, InteriorProjector, ModelSpec, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exact propagator of `H(t)` by diagonalization.
    Full,
    /// First-order product formula over the model's Trotter parts.
    Trotter,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Full, Method::Trotter];

    pub fn label(&self) -> &'static str {
        match self {
            Method::Full => "full",
            Method::Trotter => "trotter",
        }
    }
}

/// Time at which the Hamiltonian of step `k` (1-based) is frozen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeGrid {
    /// `t = k dt`.
    #[default]
    End,
    /// `t = (k - 1/2) dt`.
    Midpoint,
}

impl TimeGrid {
    pub fn sample_time(&self, step: usize, dt: f64) -> f64 {
        match self {
            TimeGrid::End => step as f64 * dt,
            TimeGrid::Midpoint => (step as f64 - 0.5) * dt,
        }
    }

    /// Step `k` of `n` as an exact fraction of the total duration.
    pub fn fraction(&self, step: usize, n_steps: usize) -> (u64, u64) {
        match self {
            TimeGrid::End => (step as u64, n_steps as u64),
            TimeGrid::Midpoint => (2 * step as u64 - 1, 2 * n_steps as u64),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvolveOptions {
    pub time_grid: TimeGrid,
    /// Keep every intermediate state in the trajectory.
    pub keep_states: bool,
}

/// Ground state of the static Hamiltonian and the region it is compared on.
#[derive(Debug, Clone)]
pub struct Target {
    pub state: StateVector,
    pub energy: f64,
    pub projector: InteriorProjector,
}

impl Target {
    pub fn compute(spec: &ModelSpec) -> Result<Self> {
        let schedule = Schedule::new(spec, ScheduleKind::Static)?;
        let spectrum = ground_state(schedule.target_hamiltonian())?;
        Ok(Target {
            state: spectrum.ground_vector(),
            energy: spectrum.ground_energy(),
            projector: build_projector(spec)?,
        })
    }
}

/// One independent run inside a batch.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub initial: StateVector,
    pub noise: NoiseModel,
}

/// Drives states through a schedule and records overlap diagnostics.
#[derive(Debug, Clone)]
pub struct Evolver {
    schedule: Schedule,
    method: Method,
    dt: f64,
    target: Target,
    options: EvolveOptions,
}

impl Evolver {
    pub fn new(spec: &ModelSpec, kind: ScheduleKind, method: Method, dt: f64, options: EvolveOptions) -> Result<Self> {
        let target = Target::compute(spec)?;
        Self::with_target(spec, kind, method, dt, options, target)
    }

    /// Reuses an already computed target.
    pub fn with_target(
        spec: &ModelSpec,
        kind: ScheduleKind,
        method: Method,
        dt: f64,
        options: EvolveOptions,
        target: Target,
    ) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::config(format!("dt must be positive, got {dt}")));
        }
        let schedule = Schedule::new(spec, kind)?;
        if target.state.sector() != spec.sector() {
            return Err(Error::Dimension { expected: spec.sector().dim(), found: target.state.dim() });
        }
        Ok(Evolver { schedule, method, dt, target, options })
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn record(&self, step: usize, psi: &StateVector) -> Result<StepRecord> {
        let overlap = interior_overlap(psi, &self.target.state, &self.target.projector)?;
        let region = expectation_in_region(self.schedule.target_hamiltonian(), psi, &self.target.projector)?;
        Ok(StepRecord {
            step,
            time: step as f64 * self.dt,
            overlap: overlap.value,
            escaped: overlap.escaped,
            norm: psi.norm(),
            interior_probability: region.probability,
            energy: region.value,
        })
    }

    pub fn run(&self, initial: &StateVector, n_steps: usize, noise: NoiseModel) -> Result<Trajectory> {
        let mut out = self.run_batch(&[RunRequest { initial: initial.clone(), noise }], n_steps)?;
        Ok(out.pop().expect("one request yields one trajectory"))
    }

    /// Advances several runs in lockstep. Each step's propagator is built
    /// once and applied to every state, so a batch gives the same result as
    /// running each request alone.
    pub fn run_batch(&self, requests: &[RunRequest], n_steps: usize) -> Result<Vec<Trajectory>> {
        let sector = self.schedule.spec().sector();
        for r in requests {
            if r.initial.sector() != sector {
                return Err(Error::Dimension { expected: sector.dim(), found: r.initial.dim() });
            }
            r.noise.validate()?;
        }
        let mut states: Vec<StateVector> = requests.iter().map(|r| r.initial.clone()).collect();
        let mut channels: Vec<_> = requests.iter().map(|r| r.noise.channel()).collect();
        let mut trajectories = requests
            .iter()
            .map(|r| {
                Ok(Trajectory {
                    metadata: RunMetadata {
                        method: self.method,
                        schedule: self.schedule.kind(),
                        dt: self.dt,
                        n_steps,
                        noise: r.noise,
                        time_grid: self.options.time_grid,
                    },
                    records: vec![self.record(0, &r.initial)?],
                    states: if self.options.keep_states { vec![r.initial.clone()] } else { Vec::new() },
                    final_state: r.initial.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let frozen = match (self.method, self.schedule.kind().is_static()) {
            (Method::Full, true) => Some(SpectralDecomposition::new(self.schedule.target_hamiltonian())?),
            _ => None,
        };

        for step in 1..=n_steps {
            let t = self.options.time_grid.sample_time(step, self.dt);
            match self.method {
                Method::Full => {
                    let fresh;
                    let decomposition = match &frozen {
                        Some(d) => d,
                        None => {
                            fresh = SpectralDecomposition::new(&self.schedule.hamiltonian_at(t)?)?;
                            &fresh
                        }
                    };
                    for psi in &mut states {
                        decomposition.propagate(psi, self.dt)?;
                    }
                }
                Method::Trotter => {
                    let propagator = TrotterPropagator::new(&self.schedule.trotter_parts_at(t), self.dt)?;
                    for psi in &mut states {
                        propagator.apply(psi)?;
                    }
                }
            }
            for ((psi, channel), traj) in states.iter_mut().zip(&mut channels).zip(&mut trajectories) {
                channel.apply(psi);
                if let Some(index) = psi.first_non_finite() {
                    return Err(Error::NonFinite { step, index });
                }
                traj.records.push(self.record(step, psi)?);
                if self.options.keep_states {
                    traj.states.push(psi.clone());
                }
            }
        }
        for (traj, psi) in trajectories.iter_mut().zip(states) {
            traj.final_state = psi;
        }
        Ok(trajectories)
    }
}

/// Builds the initial state, evolves it and returns the trajectory.
pub fn evolve(
    spec: &ModelSpec,
    kind: ScheduleKind,
    method: Method,
    initial: InitialKind,
    dt: f64,
    n_steps: usize,
    noise: NoiseModel,
) -> Result<Trajectory> {
    let evolver = Evolver::new(spec, kind, method, dt, EvolveOptions::default())?;
    evolver.run(&initial_state(spec, initial)?, n_steps, noise)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_is_stationary_under_static_schedule() {
        let spec = ModelSpec::model_1b(20, 5);
        let ev = Evolver::new(&spec, ScheduleKind::Static, Method::Full, 0.3, EvolveOptions::default()).unwrap();
        let g = ev.target().state.clone();
        let traj = ev.run(&g, 30, NoiseModel::silent()).unwrap();
        assert_eq!(traj.records.len(), 31);
        let e0 = traj.records[0].energy.unwrap();
        for r in &traj.records {
            assert!((r.overlap - 1.0).abs() < 1e-10);
            assert!((r.energy.unwrap() - e0).abs() < 1e-9);
        }
    }

    #[test]
    fn batch_matches_single_runs() {
        let spec = ModelSpec::model_1b(15, 5);
        let ev = Evolver::new(&spec, ScheduleKind::projected_cooling(), Method::Trotter, 0.3, EvolveOptions::default())
            .unwrap();
        let psi = initial_state(&spec, InitialKind::Point).unwrap();
        let requests: Vec<RunRequest> =
            (0..3).map(|s| RunRequest { initial: psi.clone(), noise: NoiseModel::new(0.05, s) }).collect();
        let batch = ev.run_batch(&requests, 12).unwrap();
        for (r, b) in requests.iter().zip(&batch) {
            let single = ev.run(&r.initial, 12, r.noise).unwrap();
            assert_eq!(single.records, b.records);
        }
    }

    #[test]
    fn rejects_bad_dt() {
        let spec = ModelSpec::model_1a(8, 3);
        for dt in [0.0, -0.3, f64::INFINITY] {
            let e = Evolver::new(&spec, ScheduleKind::Static, Method::Full, dt, EvolveOptions::default()).unwrap_err();
            assert!(e.is_configuration());
        }
    }

    #[test]
    fn midpoint_grid_times() {
        assert_eq!(TimeGrid::Midpoint.sample_time(1, 0.4), 0.2);
        assert_eq!(TimeGrid::End.fraction(3, 7), (3, 7));
        assert_eq!(TimeGrid::Midpoint.fraction(3, 7), (5, 14));
    }
}
