//! Pauli-string Hamiltonians on the full qubit space and their
//! fixed-particle-number restrictions.

mod build;
mod equivalence;
mod pauli;

pub use build::{
    build_chain_pauli, build_two_chain_pauli, pauli_from_spec, qubit_of, MAX_CHAIN_HALF_EXTENT,
    MAX_TWO_CHAIN_HALF_EXTENT,
};
pub use equivalence::{
    check_equivalence, encode_ket, sector_restrict, EquivalenceReport, PartComparison, EQUIVALENCE_TOL,
};
pub use pauli::{Pauli, PauliHamiltonian, PauliString, PauliTerm};
