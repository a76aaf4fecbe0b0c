//! Time-dependent schedules, exact and product-formula steppers, amplitude
//! noise and trajectory recording.

mod evolve;
mod noise;
mod schedule;
mod sizing;
mod step;
mod sweep;
mod trajectory;

pub use evolve::{evolve, EvolveOptions, Evolver, Method, RunRequest, Target, TimeGrid};
pub use noise::{apply_noise, derive_seed, NoiseChannel, NoiseModel};
pub use schedule::{Coefficients, Schedule, ScheduleKind, DEFAULT_KAPPA, DEFAULT_TAU};
pub use sizing::{kinetic_travel, reflection_free_half_extent, WALL_MARGIN};
pub use step::{step_full, step_trotter, FactorExponential, TrotterPropagator};
pub use sweep::{run_adiabatic_sweep, SweepPoint, SweepSettings};
pub use trajectory::{RunMetadata, StepRecord, Trajectory};
