use std::fmt;

use faer::Mat;

use super::build::{pauli_from_spec, qubit_of};
use super::pauli::PauliHamiltonian;
use crate::lattice::{build_hamiltonian, trotter_parts, Ket, ModelSpec, OperatorTag, Sector, SectorOperator};
use crate::{Error, Result};

/// Entrywise tolerance of every qubit-versus-lattice comparison.
pub const EQUIVALENCE_TOL: f64 = 1e-12;

/// Computational-basis index of a lattice ket: one `|1>` per particle.
pub fn encode_ket(half_extent: usize, ket: Ket) -> usize {
    match ket {
        Ket::One(n) => 1 << qubit_of(half_extent, 0, n),
        Ket::Two(n1, n2) => (1 << qubit_of(half_extent, 0, n1)) | (1 << qubit_of(half_extent, 1, n2)),
    }
}

/// Matrix of `hq` between the kets of `sector`, in the lattice basis order.
pub fn sector_restrict(hq: &PauliHamiltonian, sector: Sector) -> Result<SectorOperator> {
    if sector.particles() != hq.chains() || sector.half_extent() != hq.half_extent() {
        return Err(Error::config(format!(
            "sector with {} particle(s) at L = {} does not match a {}-chain qubit Hamiltonian at L = {}",
            sector.particles(),
            sector.half_extent(),
            hq.chains(),
            hq.half_extent()
        )));
    }
    let n = sector.dim();
    let codes: Vec<usize> = (0..n).map(|i| encode_ket(sector.half_extent(), sector.ket(i))).collect();
    let position: std::collections::HashMap<usize, usize> = codes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut m = Mat::<f64>::zeros(n, n);
    for (col, &code) in codes.iter().enumerate() {
        for (to, v) in hq.apply_basis(code) {
            let Some(&row) = position.get(&to) else { continue };
            if v.im.abs() > EQUIVALENCE_TOL {
                return Err(Error::domain(format!("restricted element ({row}, {col}) is complex: {v}")));
            }
            m[(row, col)] = v.re;
        }
    }
    SectorOperator::from_dense(OperatorTag::Composite, sector, m)
}

/// Largest entrywise difference, raw and after removing each operator's
/// mean diagonal. Returns `(raw, centered, shift)` where `shift` is the
/// mean diagonal of `a` minus that of `b`.
fn compare(a: &SectorOperator, b: &SectorOperator) -> Result<(f64, f64, f64)> {
    let (da, db) = (a.to_dense(), b.to_dense());
    let n = da.nrows();
    let mean = |m: &Mat<f64>| (0..n).map(|i| m[(i, i)]).sum::<f64>() / n as f64;
    let (ma, mb) = (mean(&da), mean(&db));
    let (mut raw, mut centered) = (0.0f64, 0.0f64);
    for i in 0..n {
        for j in 0..n {
            let d = da[(i, j)] - db[(i, j)];
            raw = raw.max(d.abs());
            let shift = if i == j { ma - mb } else { 0.0 };
            centered = centered.max((d - shift).abs());
        }
    }
    Ok((raw, centered, ma - mb))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartComparison {
    pub part: OperatorTag,
    pub raw_deviation: f64,
    pub centered_deviation: f64,
    pub shift: f64,
    /// Whether this part must match without a diagonal shift.
    pub exact: bool,
}

impl PartComparison {
    pub fn passed(&self) -> bool {
        let d = if self.exact { self.raw_deviation } else { self.centered_deviation };
        d <= EQUIVALENCE_TOL
    }
}

/// Outcome of comparing a model's qubit Hamiltonian, restricted to its
/// particle sector, with the lattice Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub chains: usize,
    pub half_extent: usize,
    pub hermiticity_defect: f64,
    pub conservation_defect: f64,
    /// Norm of `H|0...0>`.
    pub vacuum_residual: f64,
    pub raw_deviation: f64,
    pub centered_deviation: f64,
    /// Constant diagonal offset, qubit minus lattice.
    pub shift: f64,
    pub parts: Vec<PartComparison>,
}

impl EquivalenceReport {
    /// One chain must match exactly. Two chains must match up to a constant
    /// diagonal, carried entirely by the `D` part.
    pub fn passed(&self) -> bool {
        let total = if self.chains == 1 { self.raw_deviation } else { self.centered_deviation };
        total <= EQUIVALENCE_TOL
            && self.hermiticity_defect <= EQUIVALENCE_TOL
            && self.conservation_defect <= EQUIVALENCE_TOL
            && self.vacuum_residual <= EQUIVALENCE_TOL
            && self.parts.iter().all(PartComparison::passed)
    }

    pub fn max_deviation(&self) -> f64 {
        if self.chains == 1 {
            self.raw_deviation
        } else {
            self.centered_deviation
        }
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} chain(s), L = {}: max deviation {:.3e}, diagonal shift {:+.6}, hermiticity {:.1e}, number conservation {:.1e}",
            self.chains,
            self.half_extent,
            self.max_deviation(),
            self.shift,
            self.hermiticity_defect,
            self.conservation_defect
        )
    }
}

pub fn check_equivalence(spec: &ModelSpec) -> Result<EquivalenceReport> {
    let hq = pauli_from_spec(spec)?;
    let sector = spec.sector();
    let restricted = sector_restrict(&hq, sector)?;
    let lattice = build_hamiltonian(spec)?;
    let (raw_deviation, centered_deviation, shift) = compare(&restricted, &lattice)?;

    let mut parts = Vec::new();
    for part in trotter_parts(spec)? {
        let tag = part.tag();
        let q = sector_restrict(&hq.part(tag), sector)?;
        let (raw, centered, s) = compare(&q, &part)?;
        let exact = !(spec.chains == 2 && tag == OperatorTag::KineticDiagonal);
        parts.push(PartComparison { part: tag, raw_deviation: raw, centered_deviation: centered, shift: s, exact });
    }

    let vacuum_residual = hq.apply_basis(0).values().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    Ok(EquivalenceReport {
        chains: spec.chains,
        half_extent: spec.half_extent,
        hermiticity_defect: hq.hermiticity_defect(),
        conservation_defect: hq.number_conservation_defect(),
        vacuum_residual,
        raw_deviation,
        centered_deviation,
        shift,
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_1a_matches_exactly() {
        let r = check_equivalence(&ModelSpec::model_1a(3, 1)).unwrap();
        assert!(r.raw_deviation <= EQUIVALENCE_TOL, "{r}");
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn model_1b_matches_exactly() {
        let r = check_equivalence(&ModelSpec::model_1b(4, 2)).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn model_2_matches_up_to_diagonal_shift() {
        let r = check_equivalence(&ModelSpec::model_2(2, 1)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!((r.shift - (-1.0)).abs() < 1e-12, "{r}");
        let d = r.parts.iter().find(|p| p.part == OperatorTag::KineticDiagonal).unwrap();
        assert!((d.shift - (-1.0)).abs() < 1e-12);
        assert!(r.parts.iter().filter(|p| p.exact).all(|p| p.raw_deviation <= EQUIVALENCE_TOL));
    }

    #[test]
    fn scaled_kinetic_carries_through() {
        let spec = ModelSpec::model_1b(3, 1).with_kinetic_scale(2.5);
        assert!(check_equivalence(&spec).unwrap().passed());
    }

    #[test]
    fn hopping_restricts_to_minus_half() {
        let hq = pauli_from_spec(&ModelSpec::model_1a(2, 1)).unwrap();
        let sector = Sector::One { half_extent: 2 };
        let a = sector_restrict(&hq.part(OperatorTag::EvenBonds(None)), sector).unwrap();
        let (i, j) = (sector.index(Ket::One(0)).unwrap(), sector.index(Ket::One(1)).unwrap());
        assert_eq!(a.entry(i, j), -0.5);
    }

    #[test]
    fn mismatched_sector_rejected() {
        let hq = pauli_from_spec(&ModelSpec::model_1a(2, 1)).unwrap();
        assert!(sector_restrict(&hq, Sector::Two { half_extent: 2 }).is_err());
    }
}
