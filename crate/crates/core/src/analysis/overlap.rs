use crate::lattice::{InteriorProjector, SectorOperator, StateVector};
use crate::{Error, Result};

/// Interior probabilities below this count as "everything escaped".
pub const ESCAPE_TOL: f64 = 1e-14;

/// `|<x|y>| / sqrt(<x|x><y|y>)`; invariant under rescaling either state by
/// any nonzero complex number.
pub fn normalized_overlap(x: &StateVector, y: &StateVector) -> Result<f64> {
    let (nx, ny) = (x.norm_sqr(), y.norm_sqr());
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::domain("normalized overlap of a zero-norm state"));
    }
    Ok(x.inner(y)?.norm() / (nx * ny).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorOverlap {
    pub value: f64,
    /// No amplitude left inside the interior; `value` is reported as 0.
    pub escaped: bool,
}

/// Normalized overlap between `P psi0` and `P psi`.
pub fn interior_overlap(
    psi: &StateVector,
    psi0: &StateVector,
    projector: &InteriorProjector,
) -> Result<InteriorOverlap> {
    let p_psi = projector.apply(psi)?;
    let p_psi0 = projector.apply(psi0)?;
    if p_psi.norm_sqr() == 0.0 {
        return Ok(InteriorOverlap { value: 0.0, escaped: true });
    }
    Ok(InteriorOverlap { value: normalized_overlap(&p_psi0, &p_psi)?, escaped: false })
}

/// Post-selection success probability `|<psi0|P|psi_i>|^2`.
pub fn signal_efficiency(psi_initial: &StateVector, psi0: &StateVector, projector: &InteriorProjector) -> Result<f64> {
    let p_psi = projector.apply(psi_initial)?;
    Ok(psi0.inner(&p_psi)?.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionExpectation {
    /// `<psi|P O P|psi> / <psi|P|psi>`, or `None` when escaped.
    pub value: Option<f64>,
    /// `<psi|P|psi>`.
    pub probability: f64,
}

/// Expectation of `op` restricted to the interior, conditioned on every
/// particle being found inside it.
pub fn expectation_in_region(
    op: &SectorOperator,
    psi: &StateVector,
    projector: &InteriorProjector,
) -> Result<RegionExpectation> {
    let p_psi = projector.apply(psi)?;
    let probability = p_psi.norm_sqr();
    if probability < ESCAPE_TOL {
        return Ok(RegionExpectation { value: None, probability });
    }
    let mut o_p_psi = op.apply(&p_psi)?;
    projector.apply_in_place(&mut o_p_psi)?;
    let value = p_psi.inner(&o_p_psi)?.re / probability;
    Ok(RegionExpectation { value: Some(value), probability })
}
