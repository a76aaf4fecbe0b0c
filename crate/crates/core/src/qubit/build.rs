use std::collections::BTreeMap;

use super::pauli::{Pauli, PauliHamiltonian, PauliString, PauliTerm};
use crate::lattice::{Coupling, ModelSpec, OperatorTag, Parity};
use crate::{Error, Result};

/// Largest single-chain half-extent realized on the full qubit space (11 qubits).
pub const MAX_CHAIN_HALF_EXTENT: usize = 5;
/// Largest two-chain half-extent realized on the full qubit space (10 qubits).
pub const MAX_TWO_CHAIN_HALF_EXTENT: usize = 2;

/// Qubit holding site `n` of chain `chain` (0 or 1). Chain 0 occupies qubits
/// `0..=2L`, chain 1 occupies `2L+1..=4L+1`.
pub fn qubit_of(half_extent: usize, chain: usize, site: i64) -> usize {
    let sites = 2 * half_extent + 1;
    chain * sites + (site + half_extent as i64) as usize
}

/// `A + B + D + V` on one chain of `2L+1` qubits with unit kinetic scale.
pub fn build_chain_pauli(half_extent: usize, potential: &BTreeMap<i64, f64>) -> Result<PauliHamiltonian> {
    chain_pauli(half_extent, potential, 1.0)
}

/// `A1 + B1 + A2 + B2 + D + V + W` on two chains with unit kinetic scale.
///
/// Here `D = N1 N2`, the product of the two chains' number operators.
pub fn build_two_chain_pauli(
    half_extent: usize,
    potential: &BTreeMap<i64, f64>,
    coupling: Option<&Coupling>,
) -> Result<PauliHamiltonian> {
    two_chain_pauli(half_extent, potential, coupling, 1.0)
}

/// Qubit Hamiltonian of a model, with hopping and `D` scaled by its kinetic
/// scale.
pub fn pauli_from_spec(spec: &ModelSpec) -> Result<PauliHamiltonian> {
    spec.validate()?;
    match spec.chains {
        1 => chain_pauli(spec.half_extent, &spec.potential, spec.kinetic_scale),
        _ => two_chain_pauli(spec.half_extent, &spec.potential, spec.coupling.as_ref(), spec.kinetic_scale),
    }
}

fn check_potential(half_extent: usize, potential: &BTreeMap<i64, f64>) -> Result<()> {
    let l = half_extent as i64;
    match potential.keys().find(|n| n.abs() > l) {
        Some(n) => Err(Error::config(format!("potential site {n} outside -{l}..={l}"))),
        None => Ok(()),
    }
}

fn chain_pauli(half_extent: usize, potential: &BTreeMap<i64, f64>, scale: f64) -> Result<PauliHamiltonian> {
    if half_extent > MAX_CHAIN_HALF_EXTENT {
        return Err(Error::config(format!(
            "qubit realization limited to L <= {MAX_CHAIN_HALF_EXTENT} on one chain, got {half_extent}"
        )));
    }
    check_potential(half_extent, potential)?;
    let mut terms = Vec::new();
    hopping_terms(&mut terms, half_extent, 0, None, scale);
    for n in sites(half_extent) {
        number_terms(&mut terms, scale, qubit_of(half_extent, 0, n), OperatorTag::KineticDiagonal);
    }
    for (&n, &v) in potential {
        number_terms(&mut terms, v, qubit_of(half_extent, 0, n), OperatorTag::Potential);
    }
    Ok(PauliHamiltonian::new(2 * half_extent + 1, 1, half_extent, terms))
}

fn two_chain_pauli(
    half_extent: usize,
    potential: &BTreeMap<i64, f64>,
    coupling: Option<&Coupling>,
    scale: f64,
) -> Result<PauliHamiltonian> {
    if half_extent > MAX_TWO_CHAIN_HALF_EXTENT {
        return Err(Error::config(format!(
            "qubit realization limited to L <= {MAX_TWO_CHAIN_HALF_EXTENT} on two chains, got {half_extent}"
        )));
    }
    check_potential(half_extent, potential)?;
    let q = |chain, n| qubit_of(half_extent, chain, n);
    let mut terms = Vec::new();
    hopping_terms(&mut terms, half_extent, 0, Some(0), scale);
    hopping_terms(&mut terms, half_extent, 1, Some(1), scale);
    for n1 in sites(half_extent) {
        for n2 in sites(half_extent) {
            pair_terms(&mut terms, scale, q(0, n1), q(1, n2), OperatorTag::KineticDiagonal);
        }
    }
    for (&n, &v) in potential {
        number_terms(&mut terms, v, q(0, n), OperatorTag::Potential);
        number_terms(&mut terms, v, q(1, n), OperatorTag::Potential);
    }
    if let Some(c) = coupling {
        for n1 in sites(half_extent) {
            for n2 in sites(half_extent) {
                let w = c.value(n1, n2);
                if w != 0.0 {
                    pair_terms(&mut terms, w, q(0, n1), q(1, n2), OperatorTag::Coupling);
                }
            }
        }
    }
    Ok(PauliHamiltonian::new(2 * (2 * half_extent + 1), 2, half_extent, terms))
}

fn sites(half_extent: usize) -> impl Iterator<Item = i64> {
    let l = half_extent as i64;
    -l..=l
}

/// `-(s/4)(X X + Y Y)` on every bond `(n, n+1)`, labelled even or odd by `n`.
fn hopping_terms(terms: &mut Vec<PauliTerm>, half_extent: usize, chain: usize, particle: Option<usize>, scale: f64) {
    let l = half_extent as i64;
    for n in -l..l {
        let (a, b) = (qubit_of(half_extent, chain, n), qubit_of(half_extent, chain, n + 1));
        let part = match Parity::of(n) {
            Parity::Even => OperatorTag::EvenBonds(particle),
            Parity::Odd => OperatorTag::OddBonds(particle),
        };
        for p in [Pauli::X, Pauli::Y] {
            terms.push(PauliTerm { coefficient: -0.25 * scale, string: PauliString::new([(a, p), (b, p)]), part });
        }
    }
}

/// `c (1 - Z_q) / 2`.
fn number_terms(terms: &mut Vec<PauliTerm>, c: f64, q: usize, part: OperatorTag) {
    terms.push(PauliTerm { coefficient: 0.5 * c, string: PauliString::identity(), part });
    terms.push(PauliTerm { coefficient: -0.5 * c, string: PauliString::new([(q, Pauli::Z)]), part });
}

/// `c (1 - Z_a)(1 - Z_b) / 4`.
fn pair_terms(terms: &mut Vec<PauliTerm>, c: f64, a: usize, b: usize, part: OperatorTag) {
    let quarter = 0.25 * c;
    terms.push(PauliTerm { coefficient: quarter, string: PauliString::identity(), part });
    terms.push(PauliTerm { coefficient: -quarter, string: PauliString::new([(a, Pauli::Z)]), part });
    terms.push(PauliTerm { coefficient: -quarter, string: PauliString::new([(b, Pauli::Z)]), part });
    terms.push(PauliTerm { coefficient: quarter, string: PauliString::new([(a, Pauli::Z), (b, Pauli::Z)]), part });
}
