use std::collections::BTreeMap;
use std::fmt;

use faer::Mat;

use super::sector::Sector;
use super::state::StateVector;
use crate::{Error, Result, C64};

/// Tolerance for the symmetry check on dense operators.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Role of an operator within a Hamiltonian or its product splitting.
///
/// Bond tags carry the particle they hop (`None` on a single chain).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorTag {
    Kinetic,
    Potential,
    Coupling,
    EvenBonds(Option<usize>),
    OddBonds(Option<usize>),
    KineticDiagonal,
    Composite,
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorTag::Kinetic => f.write_str("K"),
            OperatorTag::Potential => f.write_str("V"),
            OperatorTag::Coupling => f.write_str("W"),
            OperatorTag::EvenBonds(None) => f.write_str("A"),
            OperatorTag::OddBonds(None) => f.write_str("B"),
            OperatorTag::EvenBonds(Some(p)) => write!(f, "A{}", p + 1),
            OperatorTag::OddBonds(Some(p)) => write!(f, "B{}", p + 1),
            OperatorTag::KineticDiagonal => f.write_str("D"),
            OperatorTag::Composite => f.write_str("H"),
        }
    }
}

/// Symmetric off-diagonal element between basis states `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub lo: usize,
    pub hi: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
enum Storage {
    /// Diagonal plus a list of symmetric off-diagonal pairs.
    Sparse {
        diag: Vec<f64>,
        bonds: Vec<Bond>,
    },
    Dense(Mat<f64>),
}

/// Real symmetric operator on a [`Sector`] basis.
///
/// Every operator in these models is real, so hermiticity is symmetry.
/// Nearest-neighbor operators are kept in diagonal-plus-bonds form, which
/// is what the exact factor exponentials in the stepper consume; anything
/// else is stored dense.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    tag: OperatorTag,
    sector: Sector,
    storage: Storage,
}

impl SectorOperator {
    pub(crate) fn sparse(tag: OperatorTag, sector: Sector, diag: Vec<f64>, bonds: Vec<Bond>) -> Self {
        debug_assert_eq!(diag.len(), sector.dim());
        debug_assert!(bonds.iter().all(|b| b.lo < b.hi && b.hi < sector.dim()));
        SectorOperator { tag, sector, storage: Storage::Sparse { diag, bonds } }
    }

    pub fn diagonal(tag: OperatorTag, sector: Sector, diag: Vec<f64>) -> Result<Self> {
        if diag.len() != sector.dim() {
            return Err(Error::Dimension { expected: sector.dim(), found: diag.len() });
        }
        Ok(Self::sparse(tag, sector, diag, Vec::new()))
    }

    /// Wraps a dense matrix, rejecting it unless symmetric to
    /// [`HERMITICITY_TOL`].
    pub fn from_dense(tag: OperatorTag, sector: Sector, matrix: Mat<f64>) -> Result<Self> {
        let n = sector.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension { expected: n, found: matrix.nrows().max(matrix.ncols()) });
        }
        let op = SectorOperator { tag, sector, storage: Storage::Dense(matrix) };
        let defect = op.symmetry_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::domain(format!("operator is not Hermitian (defect {defect:e})")));
        }
        Ok(op)
    }

    pub fn tag(&self) -> OperatorTag {
        self.tag
    }

    pub fn with_tag(mut self, tag: OperatorTag) -> Self {
        self.tag = tag;
        self
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.sector.dim()
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse { .. })
    }

    pub(crate) fn bonds(&self) -> Option<&[Bond]> {
        match &self.storage {
            Storage::Sparse { bonds, .. } => Some(bonds),
            Storage::Dense(_) => None,
        }
    }

    pub fn diagonal_entries(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Sparse { diag, .. } => diag.clone(),
            Storage::Dense(m) => (0..m.nrows()).map(|i| m[(i, i)]).collect(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        match &self.storage {
            Storage::Sparse { bonds, .. } => bonds.iter().all(|b| b.value == 0.0),
            Storage::Dense(m) => (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)] == 0.0)),
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        match &self.storage {
            Storage::Dense(m) => m[(row, col)],
            Storage::Sparse { diag, bonds } => {
                if row == col {
                    return diag[row];
                }
                let (lo, hi) = if row < col { (row, col) } else { (col, row) };
                bonds.iter().filter(|b| b.lo == lo && b.hi == hi).map(|b| b.value).sum()
            }
        }
    }

    pub fn to_dense(&self) -> Mat<f64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse { diag, bonds } => {
                let n = diag.len();
                let mut m = Mat::<f64>::zeros(n, n);
                for (i, &d) in diag.iter().enumerate() {
                    m[(i, i)] = d;
                }
                for b in bonds {
                    m[(b.lo, b.hi)] += b.value;
                    m[(b.hi, b.lo)] += b.value;
                }
                m
            }
        }
    }

    /// Largest `|M_ij - M_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        match &self.storage {
            Storage::Sparse { .. } => 0.0,
            Storage::Dense(m) => {
                let mut worst = 0.0f64;
                for j in 0..m.ncols() {
                    for i in 0..j {
                        worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
                    }
                }
                worst
            }
        }
    }

    /// Largest entrywise deviation between two operators on the same sector.
    pub fn max_abs_diff(&self, other: &SectorOperator) -> Result<f64> {
        self.check_sector(other.sector)?;
        let (a, b) = (self.to_dense(), other.to_dense());
        let mut worst = 0.0f64;
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                worst = worst.max((a[(i, j)] - b[(i, j)]).abs());
            }
        }
        Ok(worst)
    }

    pub fn scaled(&self, factor: f64) -> SectorOperator {
        let storage = match &self.storage {
            Storage::Sparse { diag, bonds } => Storage::Sparse {
                diag: diag.iter().map(|d| factor * d).collect(),
                bonds: bonds.iter().map(|b| Bond { value: factor * b.value, ..*b }).collect(),
            },
            Storage::Dense(m) => Storage::Dense(m * faer::Scale(factor)),
        };
        SectorOperator { tag: self.tag, sector: self.sector, storage }
    }

    /// `sum_i c_i * op_i`. Stays sparse when every term is sparse; bonds on
    /// the same pair are merged.
    pub fn linear_combination(tag: OperatorTag, terms: &[(f64, &SectorOperator)]) -> Result<SectorOperator> {
        let Some(&(_, first)) = terms.first() else {
            return Err(Error::domain("empty linear combination"));
        };
        let sector = first.sector;
        for (_, op) in terms {
            op.check_sector(sector)?;
        }
        let n = sector.dim();
        if terms.iter().all(|(_, op)| op.is_sparse()) {
            let mut diag = vec![0.0; n];
            let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
            for &(c, op) in terms {
                let Storage::Sparse { diag: d, bonds } = &op.storage else { unreachable!() };
                for (acc, &x) in diag.iter_mut().zip(d) {
                    *acc += c * x;
                }
                for b in bonds {
                    *merged.entry((b.lo, b.hi)).or_insert(0.0) += c * b.value;
                }
            }
            let bonds = merged.into_iter().map(|((lo, hi), value)| Bond { lo, hi, value }).collect();
            return Ok(SectorOperator::sparse(tag, sector, diag, bonds));
        }
        let mut acc = Mat::<f64>::zeros(n, n);
        for &(c, op) in terms {
            acc += op.to_dense() * faer::Scale(c);
        }
        Ok(SectorOperator { tag, sector, storage: Storage::Dense(acc) })
    }

    pub fn sum(tag: OperatorTag, ops: &[&SectorOperator]) -> Result<SectorOperator> {
        let terms: Vec<(f64, &SectorOperator)> = ops.iter().map(|&op| (1.0, op)).collect();
        Self::linear_combination(tag, &terms)
    }

    /// Matrix-vector product on raw amplitudes.
    pub fn apply_slice(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), found: x.len() });
        }
        Ok(match &self.storage {
            Storage::Sparse { diag, bonds } => {
                let mut y: Vec<C64> = diag.iter().zip(x).map(|(&d, &v)| v * d).collect();
                for b in bonds {
                    y[b.lo] += x[b.hi] * b.value;
                    y[b.hi] += x[b.lo] * b.value;
                }
                y
            }
            Storage::Dense(m) => (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| x[j] * m[(i, j)]).sum()).collect(),
        })
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.check_sector(psi.sector())?;
        StateVector::from_amplitudes(self.sector, self.apply_slice(psi.amplitudes())?)
    }

    /// `<psi|O|psi>`, real for a symmetric operator.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let o_psi = self.apply(psi)?;
        Ok(psi.inner(&o_psi)?.re)
    }

    pub(crate) fn check_sector(&self, sector: Sector) -> Result<()> {
        if self.sector != sector {
            return Err(Error::Dimension { expected: self.dim(), found: sector.dim() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(l: usize) -> Sector {
        Sector::One { half_extent: l }
    }

    #[test]
    fn from_dense_rejects_asymmetric() {
        let mut m = Mat::<f64>::zeros(3, 3);
        m[(0, 1)] = 1.0;
        assert!(SectorOperator::from_dense(OperatorTag::Composite, one(1), m).is_err());
    }

    #[test]
    fn sparse_and_dense_apply_agree() {
        let k = one(3).kinetic(1.7);
        let dense = SectorOperator::from_dense(OperatorTag::Kinetic, one(3), k.to_dense()).unwrap();
        let x: Vec<C64> = (0..7).map(|i| C64::new(i as f64, 1.0 - i as f64 * 0.3)).collect();
        let a = k.apply_slice(&x).unwrap();
        let b = dense.apply_slice(&x).unwrap();
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).norm() < 1e-14);
        }
    }

    #[test]
    fn linear_combination_merges_bonds() {
        let k = one(2).kinetic(1.0);
        let twice = SectorOperator::sum(OperatorTag::Composite, &[&k, &k]).unwrap();
        assert!(twice.is_sparse());
        assert_eq!(twice.bonds().unwrap().len(), 4);
        assert_eq!(twice.max_abs_diff(&k.scaled(2.0)).unwrap(), 0.0);
    }

    #[test]
    fn tag_symbols() {
        assert_eq!(OperatorTag::EvenBonds(Some(1)).to_string(), "A2");
        assert_eq!(OperatorTag::OddBonds(None).to_string(), "B");
    }
}
