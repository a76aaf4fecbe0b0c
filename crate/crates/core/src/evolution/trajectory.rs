use serde::{Deserialize, Serialize};

use super::{Method, NoiseModel, ScheduleKind, TimeGrid};
use crate::analysis::OverlapSeries;
use crate::lattice::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// `step * dt`.
    pub time: f64,
    /// Normalized interior overlap with the target ground state.
    pub overlap: f64,
    /// Nothing left inside the interior region.
    pub escaped: bool,
    pub norm: f64,
    /// `<psi|P|psi>`.
    pub interior_probability: f64,
    /// Target-Hamiltonian expectation conditioned on the interior, absent
    /// when escaped.
    pub energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub method: Method,
    pub schedule: ScheduleKind,
    pub dt: f64,
    pub n_steps: usize,
    pub noise: NoiseModel,
    pub time_grid: TimeGrid,
}

/// Diagnostics for every step `0..=n_steps` of one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub metadata: RunMetadata,
    pub records: Vec<StepRecord>,
    /// Every intermediate state, when requested.
    pub states: Vec<StateVector>,
    pub final_state: StateVector,
}

impl Trajectory {
    pub fn last(&self) -> &StepRecord {
        self.records.last().expect("trajectory always holds the initial record")
    }

    pub fn final_overlap(&self) -> f64 {
        self.last().overlap
    }

    pub fn max_overlap(&self) -> f64 {
        self.records.iter().map(|r| r.overlap).fold(0.0, f64::max)
    }

    /// Earliest recorded time at which the overlap reaches `threshold`.
    pub fn first_crossing(&self, threshold: f64) -> Option<f64> {
        self.records.iter().find(|r| r.overlap >= threshold).map(|r| r.time)
    }

    pub fn overlap_series(&self) -> OverlapSeries {
        OverlapSeries {
            times: self.records.iter().map(|r| r.time).collect(),
            overlaps: self.records.iter().map(|r| r.overlap).collect(),
        }
    }
}
