//! Exact-diagonalization oracle and the overlap, efficiency and decay
//! diagnostics built on it.

mod census;
mod fit;
mod overlap;
mod spectrum;

pub use census::{
    count_localized_states, LocalizationCandidate, LocalizationCensus, CONTINUUM_THRESHOLD, LOCALIZATION_WEIGHT,
};
pub use fit::{fit_decay_exponent, DecayFit, FitOptions, OverlapSeries, MIN_FIT_POINTS, RESIDUAL_FLOOR};
pub use overlap::{
    expectation_in_region, interior_overlap, normalized_overlap, signal_efficiency, InteriorOverlap, RegionExpectation,
    ESCAPE_TOL,
};
pub use spectrum::{full_spectrum, ground_state, SpectralDecomposition, SpectrumResult, DEGENERACY_TOL};
