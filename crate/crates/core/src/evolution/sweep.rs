use std::cmp::Ordering;

use super::step::TrotterPropagator;
use super::{Coefficients, Method, NoiseModel, Schedule, ScheduleKind, Target, TimeGrid};
use crate::analysis::{interior_overlap, SpectralDecomposition};
use crate::lattice::{ModelSpec, StateVector};
use crate::{Error, Result};

/// Outcome of one adiabatic run of `n_steps` steps.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub n_steps: usize,
    pub final_time: f64,
    pub overlap: f64,
    pub escaped: bool,
    pub norm: f64,
    pub final_state: StateVector,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepSettings {
    pub method: Method,
    pub dt: f64,
    /// Runs with `1..=max_steps` steps are performed.
    pub max_steps: usize,
    /// Run `N` draws from `noise.fork(N)`.
    pub noise: NoiseModel,
    pub time_grid: TimeGrid,
}

/// Adiabatic runs for every duration `N dt`, `N = 1..=max_steps`, each
/// ramping the kinetic term from 0 to 1 and ending on the target.
///
/// Step `k` of run `N` uses the Hamiltonian at the exact fraction `k/N` of
/// the ramp, so all runs are advanced together in increasing fraction order
/// and each distinct intermediate Hamiltonian is exponentiated once.
pub fn run_adiabatic_sweep(
    spec: &ModelSpec,
    target: &Target,
    initial: &StateVector,
    settings: SweepSettings,
) -> Result<Vec<SweepPoint>> {
    let SweepSettings { method, dt, max_steps, noise, time_grid } = settings;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::config(format!("dt must be positive, got {dt}")));
    }
    if max_steps == 0 {
        return Err(Error::config("adiabatic sweep needs at least one step"));
    }
    noise.validate()?;
    if initial.sector() != spec.sector() {
        return Err(Error::Dimension { expected: spec.sector().dim(), found: initial.dim() });
    }
    let schedule = Schedule::new(spec, ScheduleKind::Static)?;

    let mut events: Vec<(u64, u64, usize)> = Vec::new();
    for n in 1..=max_steps {
        for k in 1..=n {
            let (num, den) = time_grid.fraction(k, n);
            events.push((num, den, n));
        }
    }
    let cmp = |a: &(u64, u64, usize), b: &(u64, u64, usize)| (a.0 * b.1).cmp(&(b.0 * a.1));
    events.sort_by(|a, b| cmp(a, b).then(a.2.cmp(&b.2)));

    let mut states: Vec<StateVector> = vec![initial.clone(); max_steps];
    let mut channels: Vec<_> = (1..=max_steps).map(|n| noise.fork(n as u64).channel()).collect();
    let mut completed = vec![0usize; max_steps];

    let mut start = 0;
    while start < events.len() {
        let mut end = start + 1;
        while end < events.len() && cmp(&events[start], &events[end]) == Ordering::Equal {
            end += 1;
        }
        let (num, den, _) = events[start];
        let c = Coefficients { kinetic: num as f64 / den as f64, interaction: 1.0 };
        let group = &events[start..end];
        match method {
            Method::Full => {
                let d = SpectralDecomposition::new(&schedule.hamiltonian_with(c)?)?;
                for &(_, _, n) in group {
                    d.propagate(&mut states[n - 1], dt)?;
                }
            }
            Method::Trotter => {
                let p = TrotterPropagator::new(&schedule.trotter_parts_with(c), dt)?;
                for &(_, _, n) in group {
                    p.apply(&mut states[n - 1])?;
                }
            }
        }
        for &(_, _, n) in group {
            let psi = &mut states[n - 1];
            channels[n - 1].apply(psi);
            completed[n - 1] += 1;
            if let Some(index) = psi.first_non_finite() {
                return Err(Error::NonFinite { step: completed[n - 1], index });
            }
        }
        start = end;
    }

    states
        .into_iter()
        .enumerate()
        .map(|(i, psi)| {
            let o = interior_overlap(&psi, &target.state, &target.projector)?;
            Ok(SweepPoint {
                n_steps: i + 1,
                final_time: (i + 1) as f64 * dt,
                overlap: o.value,
                escaped: o.escaped,
                norm: psi.norm(),
                final_state: psi,
            })
        })
        .collect()
}
