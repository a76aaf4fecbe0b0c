//! Position bases, lattice operators, the interior projector and the model
//! presets.

mod build;
mod model;
mod operator;
mod projector;
mod sector;
mod state;

pub use build::{
    build_hamiltonian, build_kinetic, build_potential, build_projector, initial_state, trotter_parts, InitialKind,
};
pub use model::{Coupling, ModelSpec, Preset};
pub use operator::{Bond, OperatorTag, SectorOperator, HERMITICITY_TOL};
pub use projector::InteriorProjector;
pub use sector::{Ket, Parity, Sector};
pub use state::StateVector;
