use std::collections::BTreeMap;
use std::fmt;

use crate::lattice::OperatorTag;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `(flips, phase)` of this operator acting on a qubit in state `bit`.
    fn act(self, bit: bool) -> (bool, C64) {
        match (self, bit) {
            (Pauli::I, _) => (false, C64::new(1.0, 0.0)),
            (Pauli::X, _) => (true, C64::new(1.0, 0.0)),
            (Pauli::Y, false) => (true, C64::new(0.0, 1.0)),
            (Pauli::Y, true) => (true, C64::new(0.0, -1.0)),
            (Pauli::Z, false) => (false, C64::new(1.0, 0.0)),
            (Pauli::Z, true) => (false, C64::new(-1.0, 0.0)),
        }
    }
}

/// Tensor product of single-qubit Paulis; qubits not listed carry `I`.
///
/// Qubit `q` is bit `q` of a computational-basis index, and `|1>` marks an
/// occupied site.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    ops: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn identity() -> Self {
        PauliString::default()
    }

    /// Panics if a qubit appears twice.
    pub fn new(ops: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        let mut ops: Vec<(usize, Pauli)> = ops.into_iter().filter(|&(_, p)| p != Pauli::I).collect();
        ops.sort();
        assert!(ops.windows(2).all(|w| w[0].0 != w[1].0), "repeated qubit in Pauli string");
        PauliString { ops }
    }

    pub fn ops(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.ops.iter().copied()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.ops.last().map(|&(q, _)| q)
    }

    /// Image of basis state `b` as `(b', phase)`.
    pub fn act(&self, b: usize) -> (usize, C64) {
        let mut out = b;
        let mut phase = C64::new(1.0, 0.0);
        for (q, p) in self.ops() {
            let (flip, ph) = p.act(b >> q & 1 == 1);
            if flip {
                out ^= 1 << q;
            }
            phase *= ph;
        }
        (out, phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return f.write_str("I");
        }
        for (i, (q, p)) in self.ops().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p:?}{q}")?;
        }
        Ok(())
    }
}

/// `coefficient * string`, labelled by the Hamiltonian piece it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
    pub part: OperatorTag,
}

/// Real linear combination of Pauli strings on `qubits` qubits, acting on
/// the full `2^qubits` computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliHamiltonian {
    qubits: usize,
    chains: usize,
    half_extent: usize,
    terms: Vec<PauliTerm>,
}

impl PauliHamiltonian {
    pub(crate) fn new(qubits: usize, chains: usize, half_extent: usize, terms: Vec<PauliTerm>) -> Self {
        debug_assert!(terms.iter().all(|t| t.string.max_qubit().is_none_or(|q| q < qubits)));
        PauliHamiltonian { qubits, chains, half_extent, terms }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn chains(&self) -> usize {
        self.chains
    }

    pub fn half_extent(&self) -> usize {
        self.half_extent
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Only the terms labelled `part`.
    pub fn part(&self, part: OperatorTag) -> PauliHamiltonian {
        let terms = self.terms.iter().filter(|t| t.part == part).cloned().collect();
        PauliHamiltonian { terms, ..*self }
    }

    /// Distinct part labels in first-appearance order.
    pub fn part_tags(&self) -> Vec<OperatorTag> {
        let mut tags = Vec::new();
        for t in &self.terms {
            if !tags.contains(&t.part) {
                tags.push(t.part);
            }
        }
        tags
    }

    /// `H|b>` as a map from basis index to amplitude, with cancelling terms
    /// summed and exact zeros dropped.
    pub fn apply_basis(&self, b: usize) -> BTreeMap<usize, C64> {
        let mut out: BTreeMap<usize, C64> = BTreeMap::new();
        for t in &self.terms {
            let (to, phase) = t.string.act(b);
            *out.entry(to).or_default() += phase * t.coefficient;
        }
        out.retain(|_, v| *v != C64::new(0.0, 0.0));
        out
    }

    /// `<row|H|col>`.
    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.apply_basis(col).get(&row).copied().unwrap_or_default()
    }

    /// Dense `2^N x 2^N` matrix, row-major.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let n = self.dim();
        let mut m = vec![vec![C64::new(0.0, 0.0); n]; n];
        (0..n).for_each(|col| {
            for (row, v) in self.apply_basis(col) {
                m[row][col] = v;
            }
        });
        m
    }

    /// `max |H_rc - conj(H_cr)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut entries: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for col in 0..self.dim() {
            for (row, v) in self.apply_basis(col) {
                entries.insert((row, col), v);
            }
        }
        entries
            .iter()
            .map(|(&(r, c), v)| (v - entries.get(&(c, r)).copied().unwrap_or_default().conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Occupation count of each chain in basis state `b`.
    pub fn occupations(&self, b: usize) -> Vec<u32> {
        let sites = 2 * self.half_extent + 1;
        let mask = (1usize << sites) - 1;
        (0..self.chains).map(|c| ((b >> (c * sites)) & mask).count_ones()).collect()
    }

    /// Largest amplitude that `H` moves between different per-chain particle
    /// numbers; zero when `H` conserves every chain's number operator.
    pub fn number_conservation_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for b in 0..self.dim() {
            let occ = self.occupations(b);
            for (to, v) in self.apply_basis(b) {
                if self.occupations(to) != occ {
                    worst = worst.max(v.norm());
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_actions() {
        let y = PauliString::new([(0, Pauli::Y)]);
        assert_eq!(y.act(0), (1, C64::new(0.0, 1.0)));
        assert_eq!(y.act(1), (0, C64::new(0.0, -1.0)));
        let z = PauliString::new([(1, Pauli::Z)]);
        assert_eq!(z.act(0b10), (0b10, C64::new(-1.0, 0.0)));
        assert_eq!(z.act(0b01), (0b01, C64::new(1.0, 0.0)));
    }

    #[test]
    fn display_and_identity() {
        assert_eq!(PauliString::new([(3, Pauli::X), (1, Pauli::Z), (2, Pauli::I)]).to_string(), "Z1 X3");
        assert!(PauliString::new([(0, Pauli::I)]).is_identity());
    }

    #[test]
    #[should_panic]
    fn repeated_qubit_panics() {
        PauliString::new([(0, Pauli::X), (0, Pauli::Z)]);
    }

    #[test]
    fn exchange_term_hops_one_excitation() {
        let tag = OperatorTag::EvenBonds(None);
        let terms = vec![
            PauliTerm { coefficient: -0.25, string: PauliString::new([(0, Pauli::X), (1, Pauli::X)]), part: tag },
            PauliTerm { coefficient: -0.25, string: PauliString::new([(0, Pauli::Y), (1, Pauli::Y)]), part: tag },
        ];
        let h = PauliHamiltonian::new(2, 1, 0, terms);
        assert_eq!(h.element(0b10, 0b01), C64::new(-0.5, 0.0));
        assert!(h.apply_basis(0b11).is_empty());
        assert!(h.apply_basis(0b00).is_empty());
        assert_eq!(h.hermiticity_defect(), 0.0);
    }
}
