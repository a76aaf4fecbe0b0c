use crate::analysis::SpectralDecomposition;
use crate::lattice::{SectorOperator, StateVector};
use crate::{Error, Result, C64};

pub(crate) fn check_dt(dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt >= 0.0) {
        return Err(Error::domain(format!("time step must be finite and non-negative, got {dt}")));
    }
    Ok(())
}

/// `exp(-i H dt) psi` by exact diagonalization of `H`.
pub fn step_full(psi: &StateVector, h: &SectorOperator, dt: f64) -> Result<StateVector> {
    check_dt(dt)?;
    h.check_sector(psi.sector())?;
    let mut out = psi.clone();
    if dt == 0.0 {
        return Ok(out);
    }
    SpectralDecomposition::new(h)?.propagate(&mut out, dt)?;
    Ok(out)
}

/// One first-order product-formula step: `exp(-i P_1 dt) ... exp(-i P_m dt) psi`,
/// so the last part acts first.
pub fn step_trotter(psi: &StateVector, parts: &[SectorOperator], dt: f64) -> Result<StateVector> {
    check_dt(dt)?;
    for p in parts {
        p.check_sector(psi.sector())?;
    }
    let mut out = psi.clone();
    if dt == 0.0 {
        return Ok(out);
    }
    TrotterPropagator::new(parts, dt)?.apply(&mut out)?;
    Ok(out)
}

/// Precomputed `exp(-i P dt)` for one product-formula factor.
///
/// Operators whose bonds touch every basis state at most once split into
/// independent 2x2 blocks and phases and are exponentiated in closed form.
/// Anything else falls back to diagonalization.
#[derive(Debug)]
pub enum FactorExponential {
    Local { phases: Vec<C64>, pairs: Vec<(usize, usize, [C64; 4])> },
    Spectral { decomposition: SpectralDecomposition, dt: f64 },
}

impl FactorExponential {
    pub fn new(op: &SectorOperator, dt: f64) -> Result<Self> {
        check_dt(dt)?;
        match op.bonds().filter(|b| bonds_are_disjoint(b, op.dim())) {
            Some(bonds) => {
                let diag = op.diagonal_entries();
                let mut paired = vec![false; diag.len()];
                let mut pairs = Vec::with_capacity(bonds.len());
                for b in bonds {
                    paired[b.lo] = true;
                    paired[b.hi] = true;
                    pairs.push((b.lo, b.hi, pair_exponential(diag[b.lo], diag[b.hi], b.value, dt)));
                }
                let phases = diag
                    .iter()
                    .zip(&paired)
                    .map(|(&d, &p)| if p { C64::new(1.0, 0.0) } else { C64::from_polar(1.0, -d * dt) })
                    .collect();
                Ok(FactorExponential::Local { phases, pairs })
            }
            None => Ok(FactorExponential::Spectral { decomposition: SpectralDecomposition::new(op)?, dt }),
        }
    }

    pub fn apply(&self, psi: &mut StateVector) -> Result<()> {
        match self {
            FactorExponential::Local { phases, pairs } => {
                if phases.len() != psi.dim() {
                    return Err(Error::Dimension { expected: phases.len(), found: psi.dim() });
                }
                let amps = psi.amplitudes_mut();
                for (a, &ph) in amps.iter_mut().zip(phases) {
                    *a *= ph;
                }
                for &(i, j, [u00, u01, u10, u11]) in pairs {
                    let (x, y) = (amps[i], amps[j]);
                    amps[i] = u00 * x + u01 * y;
                    amps[j] = u10 * x + u11 * y;
                }
                Ok(())
            }
            FactorExponential::Spectral { decomposition, dt } => decomposition.propagate(psi, *dt),
        }
    }
}

fn bonds_are_disjoint(bonds: &[crate::lattice::Bond], dim: usize) -> bool {
    let mut seen = vec![false; dim];
    for b in bonds {
        if seen[b.lo] || seen[b.hi] {
            return false;
        }
        seen[b.lo] = true;
        seen[b.hi] = true;
    }
    true
}

/// `exp(-i M dt)` for `M = [[a, h], [h, b]]`, row-major.
fn pair_exponential(a: f64, b: f64, h: f64, dt: f64) -> [C64; 4] {
    let mean = 0.5 * (a + b);
    let delta = 0.5 * (a - b);
    let omega = delta.hypot(h);
    let (sin, cos) = (omega * dt).sin_cos();
    let sinc = if omega == 0.0 { dt } else { sin / omega };
    let phase = C64::from_polar(1.0, -mean * dt);
    let i = C64::new(0.0, 1.0);
    [
        phase * (cos - i * (delta * sinc)),
        phase * (-i * (h * sinc)),
        phase * (-i * (h * sinc)),
        phase * (cos + i * (delta * sinc)),
    ]
}

/// A full product-formula step with every factor precomputed.
#[derive(Debug)]
pub struct TrotterPropagator {
    /// In application order (reverse of the part order).
    factors: Vec<FactorExponential>,
}

impl TrotterPropagator {
    pub fn new(parts: &[SectorOperator], dt: f64) -> Result<Self> {
        let factors = parts.iter().rev().map(|p| FactorExponential::new(p, dt)).collect::<Result<_>>()?;
        Ok(TrotterPropagator { factors })
    }

    pub fn apply(&self, psi: &mut StateVector) -> Result<()> {
        for f in &self.factors {
            f.apply(psi)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hamiltonian, trotter_parts, ModelSpec, OperatorTag};

    fn packet(spec: &ModelSpec) -> StateVector {
        let sector = spec.sector();
        let amps = (0..sector.dim()).map(|i| C64::new((0.37 * i as f64).sin(), (0.11 * i as f64).cos())).collect();
        StateVector::from_amplitudes(sector, amps).unwrap().normalized().unwrap()
    }

    #[test]
    fn zero_step_is_identity() {
        let spec = ModelSpec::model_1b(10, 5);
        let psi = packet(&spec);
        let h = build_hamiltonian(&spec).unwrap();
        assert_eq!(step_full(&psi, &h, 0.0).unwrap(), psi);
        assert_eq!(step_trotter(&psi, &trotter_parts(&spec).unwrap(), 0.0).unwrap(), psi);
    }

    #[test]
    fn negative_step_rejected() {
        let spec = ModelSpec::model_1a(6, 3);
        let psi = packet(&spec);
        let h = build_hamiltonian(&spec).unwrap();
        assert!(matches!(step_full(&psi, &h, -0.1), Err(Error::Domain(_))));
        assert!(step_trotter(&psi, &trotter_parts(&spec).unwrap(), f64::NAN).is_err());
    }

    #[test]
    fn local_factor_matches_spectral() {
        let spec = ModelSpec::model_2(4, 2);
        let psi = packet(&spec);
        for part in trotter_parts(&spec).unwrap() {
            let mut local = psi.clone();
            let f = FactorExponential::new(&part, 0.3).unwrap();
            assert!(matches!(f, FactorExponential::Local { .. }), "{}", part.tag());
            f.apply(&mut local).unwrap();
            let mut exact = psi.clone();
            SpectralDecomposition::new(&part).unwrap().propagate(&mut exact, 0.3).unwrap();
            assert!(local.distance(&exact).unwrap() < 1e-13, "{}", part.tag());
        }
    }

    #[test]
    fn overlapping_bonds_fall_back_to_spectral() {
        let spec = ModelSpec::model_1a(5, 2);
        let k = build_hamiltonian(&spec).unwrap();
        assert!(matches!(FactorExponential::new(&k, 0.1).unwrap(), FactorExponential::Spectral { .. }));
    }

    #[test]
    fn trotter_error_is_second_order_in_dt() {
        let spec = ModelSpec::model_1b(12, 5);
        let psi = packet(&spec);
        let h = build_hamiltonian(&spec).unwrap();
        let parts = trotter_parts(&spec).unwrap();
        let err = |dt: f64| {
            let a = step_full(&psi, &h, dt).unwrap();
            let b = step_trotter(&psi, &parts, dt).unwrap();
            a.distance(&b).unwrap()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn commuting_parts_are_exact() {
        let spec = ModelSpec::model_1a(6, 3);
        let psi = packet(&spec);
        let diag = build_hamiltonian(&spec).unwrap().diagonal_entries();
        let a = SectorOperator::diagonal(OperatorTag::Potential, spec.sector(), diag.clone()).unwrap();
        let b =
            SectorOperator::diagonal(OperatorTag::Potential, spec.sector(), diag.iter().map(|d| -0.5 * d).collect())
                .unwrap();
        let sum = SectorOperator::sum(OperatorTag::Composite, &[&a, &b]).unwrap();
        let split = step_trotter(&psi, &[a, b], 0.7).unwrap();
        let joint = step_full(&psi, &sum, 0.7).unwrap();
        assert!(split.distance(&joint).unwrap() < 1e-14);
    }
}
