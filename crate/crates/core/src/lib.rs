//! Numerical simulator for projected cooling of localized ground states.
//!
//! The crate builds particle-conserving lattice Hamiltonians on one or two
//! linked chains, evolves states under static, adiabatic and
//! projected-cooling schedules (exact spectral steps or an ordered product
//! of exactly solvable factors), and measures how well the part of the
//! wave function left inside a compact interior region matches the exact
//! localized ground state.
//!
//! Module map:
//!
//! * [`lattice`]: position bases, operators, interior projector, model presets.
//! * [`evolution`]: schedules, steppers, noise channel, trajectories, sweeps.
//! * [`analysis`]: exact-diagonalization oracle and overlap metrics.
//! * [`qubit`]: Pauli-string Hamiltonians and their fixed-number sectors.
//! * [`harness`]: experiment configs, figure runners, output tables, checks.

pub mod analysis;
pub mod error;
pub mod evolution;
pub mod harness;
pub mod lattice;
pub mod qubit;

pub use error::{Error, Result};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
