use super::spectrum::full_spectrum;
use crate::lattice::{InteriorProjector, SectorOperator};
use crate::Result;

/// Energies below this lie under the kinetic continuum (band bottom 0 for
/// any kinetic scale).
pub const CONTINUUM_THRESHOLD: f64 = -1e-9;
/// Minimum interior weight for a state to count as localized.
pub const LOCALIZATION_WEIGHT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationCandidate {
    pub index: usize,
    pub energy: f64,
    /// `||P v||^2`.
    pub interior_weight: f64,
    pub below_continuum: bool,
    pub concentrated: bool,
}

impl LocalizationCandidate {
    pub fn is_localized(&self) -> bool {
        self.below_continuum && self.concentrated
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationCensus {
    pub count: usize,
    /// Every eigenstate meeting at least one of the two criteria.
    pub candidates: Vec<LocalizationCandidate>,
}

/// Counts eigenstates that are both below the continuum and concentrated
/// in the interior region.
pub fn count_localized_states(h: &SectorOperator, projector: &InteriorProjector) -> Result<LocalizationCensus> {
    let spectrum = full_spectrum(h)?;
    let mut candidates = Vec::new();
    for k in 0..spectrum.len() {
        let energy = spectrum.energy(k);
        let interior_weight = projector.weight(&spectrum.vector(k));
        let below_continuum = energy < CONTINUUM_THRESHOLD;
        let concentrated = interior_weight >= LOCALIZATION_WEIGHT;
        if below_continuum || concentrated {
            candidates.push(LocalizationCandidate { index: k, energy, interior_weight, below_continuum, concentrated });
        }
    }
    let count = candidates.iter().filter(|c| c.is_localized()).count();
    Ok(LocalizationCensus { count, candidates })
}
