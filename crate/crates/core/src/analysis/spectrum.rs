use std::collections::HashSet;
use std::sync::OnceLock;

use faer::{Mat, Side};

use crate::lattice::{Sector, SectorOperator, StateVector};
use crate::{Error, Result, C64};

/// Two lowest eigenvalues closer than this abort ground-state extraction.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Orthonormal combination of at most two basis kets.
#[derive(Debug, Clone, Copy)]
struct Combo {
    first: usize,
    second: Option<(usize, f64)>,
}

impl Combo {
    fn first_weight(&self) -> f64 {
        if self.second.is_some() {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0
        }
    }
}

#[derive(Debug)]
enum BlockBasis {
    /// The whole sector, untransformed.
    Identity,
    Combos(Vec<Combo>),
}

#[derive(Debug)]
struct Eigen {
    values: Vec<f64>,
    vectors: Mat<f64>,
}

#[derive(Debug)]
struct Block {
    basis: BlockBasis,
    matrix: Mat<f64>,
    eigen: OnceLock<std::result::Result<Eigen, String>>,
}

impl Block {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn eigen(&self) -> Result<&Eigen> {
        self.eigen
            .get_or_init(|| {
                let evd = self.matrix.self_adjoint_eigen(Side::Lower).map_err(|e| format!("{e:?}"))?;
                let n = self.dim();
                let s = evd.S().column_vector();
                let values: Vec<f64> = (0..n).map(|i| s[i]).collect();
                if values.iter().any(|v| !v.is_finite()) {
                    return Err("non-finite eigenvalue".to_string());
                }
                Ok(Eigen { values, vectors: evd.U().to_owned() })
            })
            .as_ref()
            .map_err(|e| Error::Eigen(e.clone()))
    }

    /// Block coordinates of `psi` as an `n x 2` real matrix (re, im).
    fn gather(&self, psi: &[C64]) -> (Mat<f64>, bool) {
        let n = self.dim();
        let mut y = Mat::<f64>::zeros(n, 2);
        let mut any = false;
        let mut put = |p: usize, v: C64| {
            y[(p, 0)] = v.re;
            y[(p, 1)] = v.im;
            any |= v.re != 0.0 || v.im != 0.0;
        };
        match &self.basis {
            BlockBasis::Identity => psi.iter().enumerate().for_each(|(p, &v)| put(p, v)),
            BlockBasis::Combos(combos) => {
                for (p, c) in combos.iter().enumerate() {
                    let mut v = psi[c.first] * c.first_weight();
                    if let Some((j, w)) = c.second {
                        v += psi[j] * w;
                    }
                    put(p, v);
                }
            }
        }
        (y, any)
    }

    fn scatter(&self, z: &Mat<f64>, out: &mut [C64]) {
        match &self.basis {
            BlockBasis::Identity => {
                for (p, o) in out.iter_mut().enumerate() {
                    *o = C64::new(z[(p, 0)], z[(p, 1)]);
                }
            }
            BlockBasis::Combos(combos) => {
                for (p, c) in combos.iter().enumerate() {
                    let v = C64::new(z[(p, 0)], z[(p, 1)]);
                    out[c.first] += v * c.first_weight();
                    if let Some((j, w)) = c.second {
                        out[j] += v * w;
                    }
                }
            }
        }
    }
}

/// Spectral decomposition of a real symmetric sector operator.
///
/// Two-particle operators that commute with particle exchange are split
/// into exchange-symmetric and antisymmetric blocks and each block is
/// diagonalized separately; the result is still the exact decomposition
/// of the full operator. Blocks are diagonalized lazily, so a state with
/// no weight in a block never pays for it.
#[derive(Debug)]
pub struct SpectralDecomposition {
    sector: Sector,
    blocks: Vec<Block>,
}

impl SpectralDecomposition {
    pub fn new(op: &SectorOperator) -> Result<Self> {
        let sector = op.sector();
        let blocks = if matches!(sector, Sector::Two { .. }) && commutes_with_exchange(op) {
            exchange_blocks(op)
        } else {
            vec![Block { basis: BlockBasis::Identity, matrix: op.to_dense(), eigen: OnceLock::new() }]
        };
        Ok(SpectralDecomposition { sector, blocks })
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// Number of symmetry blocks (1, or 2 for exchange-symmetric operators).
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `psi <- exp(-i H dt) psi`.
    pub fn propagate(&self, psi: &mut StateVector, dt: f64) -> Result<()> {
        if psi.sector() != self.sector {
            return Err(Error::Dimension { expected: self.sector.dim(), found: psi.dim() });
        }
        let mut out = vec![C64::new(0.0, 0.0); psi.dim()];
        for block in &self.blocks {
            let (y, any) = block.gather(psi.amplitudes());
            if !any {
                continue;
            }
            let eig = block.eigen()?;
            let mut c = eig.vectors.transpose() * &y;
            for (k, &lambda) in eig.values.iter().enumerate() {
                let rotated = C64::new(c[(k, 0)], c[(k, 1)]) * C64::from_polar(1.0, -lambda * dt);
                c[(k, 0)] = rotated.re;
                c[(k, 1)] = rotated.im;
            }
            let z = &eig.vectors * &c;
            block.scatter(&z, &mut out);
        }
        psi.amplitudes_mut().copy_from_slice(&out);
        Ok(())
    }

    /// Full eigensystem in the sector basis, ascending, with the sign
    /// convention that the first non-negligible component is positive.
    pub fn spectrum(&self) -> Result<SpectrumResult> {
        let n = self.sector.dim();
        let mut order: Vec<(f64, usize, usize)> = Vec::with_capacity(n);
        for (b, block) in self.blocks.iter().enumerate() {
            for (k, &v) in block.eigen()?.values.iter().enumerate() {
                order.push((v, b, k));
            }
        }
        order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

        let mut vectors = Mat::<f64>::zeros(n, n);
        for (col, &(_, b, k)) in order.iter().enumerate() {
            let block = &self.blocks[b];
            let u = &block.eigen()?.vectors;
            match &block.basis {
                BlockBasis::Identity => {
                    for i in 0..n {
                        vectors[(i, col)] = u[(i, k)];
                    }
                }
                BlockBasis::Combos(combos) => {
                    for (p, c) in combos.iter().enumerate() {
                        vectors[(c.first, col)] += u[(p, k)] * c.first_weight();
                        if let Some((j, w)) = c.second {
                            vectors[(j, col)] += u[(p, k)] * w;
                        }
                    }
                }
            }
            let lead = (0..n).map(|i| vectors[(i, col)]).find(|x| x.abs() > 1e-12);
            if lead.is_some_and(|x| x < 0.0) {
                for i in 0..n {
                    vectors[(i, col)] = -vectors[(i, col)];
                }
            }
        }
        Ok(SpectrumResult { sector: self.sector, eigenvalues: order.iter().map(|o| o.0).collect(), vectors })
    }
}

fn commutes_with_exchange(op: &SectorOperator) -> bool {
    let sector = op.sector();
    let swap = |i| sector.exchanged(i);
    match op.bonds() {
        Some(bonds) => {
            let diag = op.diagonal_entries();
            if (0..diag.len()).any(|i| diag[i] != diag[swap(i)]) {
                return false;
            }
            let set: HashSet<(usize, usize, u64)> = bonds.iter().map(|b| (b.lo, b.hi, b.value.to_bits())).collect();
            bonds.iter().all(|b| {
                let (x, y) = (swap(b.lo), swap(b.hi));
                set.contains(&(x.min(y), x.max(y), b.value.to_bits()))
            })
        }
        None => {
            let m = op.to_dense();
            (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| m[(i, j)] == m[(swap(i), swap(j))]))
        }
    }
}

fn exchange_blocks(op: &SectorOperator) -> Vec<Block> {
    let sector = op.sector();
    let n = sector.dim();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut sym = Vec::new();
    let mut anti = Vec::new();
    // (block, position, weight) memberships of every basis index.
    let mut member: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); n];
    for i in 0..n {
        let j = sector.exchanged(i);
        if j == i {
            member[i].push((0, sym.len(), 1.0));
            sym.push(Combo { first: i, second: None });
        } else if i < j {
            member[i].push((0, sym.len(), h));
            member[j].push((0, sym.len(), h));
            sym.push(Combo { first: i, second: Some((j, h)) });
            member[i].push((1, anti.len(), h));
            member[j].push((1, anti.len(), -h));
            anti.push(Combo { first: i, second: Some((j, -h)) });
        }
    }
    let mut mats = [Mat::<f64>::zeros(sym.len(), sym.len()), Mat::<f64>::zeros(anti.len(), anti.len())];
    let mut add = |i: usize, j: usize, v: f64| {
        for &(bi, pi, wi) in &member[i] {
            for &(bj, pj, wj) in &member[j] {
                if bi == bj {
                    mats[bi][(pi, pj)] += wi * wj * v;
                }
            }
        }
    };
    match op.bonds() {
        Some(bonds) => {
            for (i, d) in op.diagonal_entries().into_iter().enumerate() {
                add(i, i, d);
            }
            for b in bonds {
                add(b.lo, b.hi, b.value);
                add(b.hi, b.lo, b.value);
            }
        }
        None => {
            let m = op.to_dense();
            for j in 0..n {
                for i in 0..n {
                    let v = m[(i, j)];
                    if v != 0.0 {
                        add(i, j, v);
                    }
                }
            }
        }
    }
    let [ms, ma] = mats;
    vec![
        Block { basis: BlockBasis::Combos(sym), matrix: ms, eigen: OnceLock::new() },
        Block { basis: BlockBasis::Combos(anti), matrix: ma, eigen: OnceLock::new() },
    ]
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a sector operator.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    sector: Sector,
    eigenvalues: Vec<f64>,
    vectors: Mat<f64>,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn energy(&self, k: usize) -> f64 {
        self.eigenvalues[k]
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// The `k`-th eigenvector (real amplitudes).
    pub fn vector(&self, k: usize) -> StateVector {
        let col: Vec<C64> = (0..self.vectors.nrows()).map(|i| C64::new(self.vectors[(i, k)], 0.0)).collect();
        StateVector::from_amplitudes(self.sector, col).expect("eigenvector dimension matches its sector")
    }

    pub fn ground_vector(&self) -> StateVector {
        self.vector(0)
    }

    /// `||H v_k - E_k v_k||`.
    pub fn residual(&self, op: &SectorOperator, k: usize) -> Result<f64> {
        let v = self.vector(k);
        let hv = op.apply(&v)?;
        let e = self.eigenvalues[k];
        Ok(hv.amplitudes().iter().zip(v.amplitudes()).map(|(a, b)| (a - b * e).norm_sqr()).sum::<f64>().sqrt())
    }
}

/// Complete eigensystem, no degeneracy check.
pub fn full_spectrum(op: &SectorOperator) -> Result<SpectrumResult> {
    SpectralDecomposition::new(op)?.spectrum()
}

/// Eigensystem whose lowest pair is the non-degenerate ground state.
pub fn ground_state(op: &SectorOperator) -> Result<SpectrumResult> {
    let spectrum = full_spectrum(op)?;
    if spectrum.len() >= 2 {
        let (e0, e1) = (spectrum.energy(0), spectrum.energy(1));
        if e1 - e0 < DEGENERACY_TOL {
            return Err(Error::DegenerateGround { e0, e1 });
        }
    }
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hamiltonian, Ket, ModelSpec, OperatorTag};

    #[test]
    fn diagonal_operator_spectrum_is_sorted_diagonal() {
        let sector = Sector::One { half_extent: 2 };
        let op = SectorOperator::diagonal(OperatorTag::Potential, sector, vec![3.0, -1.0, 2.0, 0.5, -4.0]).unwrap();
        let s = ground_state(&op).unwrap();
        assert_eq!(s.eigenvalues(), &[-4.0, -1.0, 0.5, 2.0, 3.0]);
        assert_eq!(s.ground_vector().amplitude(Ket::One(2)).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn degenerate_ground_is_rejected() {
        let sector = Sector::One { half_extent: 1 };
        let op = SectorOperator::diagonal(OperatorTag::Potential, sector, vec![-1.0, -1.0, 0.0]).unwrap();
        assert!(matches!(ground_state(&op), Err(Error::DegenerateGround { .. })));
        assert!(full_spectrum(&op).is_ok());
    }

    #[test]
    fn exchange_blocks_reproduce_dense_spectrum() {
        let spec = ModelSpec::model_2(4, 2);
        let h = build_hamiltonian(&spec).unwrap();
        let blocked = SpectralDecomposition::new(&h).unwrap();
        assert_eq!(blocked.block_count(), 2);
        let s = blocked.spectrum().unwrap();
        let dense = h.to_dense().self_adjoint_eigen(Side::Lower).unwrap();
        let d = dense.S().column_vector();
        for k in 0..s.len() {
            assert!((s.energy(k) - d[k]).abs() < 1e-12);
            assert!(s.residual(&h, k).unwrap() < 1e-9);
        }
        for a in 0..s.len() {
            for b in 0..=a {
                let ip = s.vector(a).inner(&s.vector(b)).unwrap().re;
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sign_convention_first_component_positive() {
        let h = build_hamiltonian(&ModelSpec::model_1b(10, 5)).unwrap();
        let s = full_spectrum(&h).unwrap();
        for k in 0..s.len() {
            let v = s.vector(k);
            let lead = v.amplitudes().iter().find(|a| a.re.abs() > 1e-12).unwrap();
            assert!(lead.re > 0.0);
        }
    }

    #[test]
    fn propagate_matches_eigen_phases() {
        let h = build_hamiltonian(&ModelSpec::model_1b(8, 4)).unwrap();
        let d = SpectralDecomposition::new(&h).unwrap();
        let s = d.spectrum().unwrap();
        let mut psi = s.vector(2);
        d.propagate(&mut psi, 0.7).unwrap();
        let phase = C64::from_polar(1.0, -s.energy(2) * 0.7);
        for (a, b) in psi.amplitudes().iter().zip(s.vector(2).amplitudes()) {
            assert!((a - b * phase).norm() < 1e-12);
        }
    }
}
