use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::lattice::StateVector;
use crate::{Error, Result, C64};

/// Multiplicative amplitude noise: after each step every amplitude is
/// multiplied by an independent `1 + z`, where `z` is complex Gaussian with
/// real and imaginary parts of root-mean-square `epsilon / sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub epsilon: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub const fn new(epsilon: f64, seed: u64) -> Self {
        NoiseModel { epsilon, seed }
    }

    pub const fn silent() -> Self {
        NoiseModel { epsilon: 0.0, seed: 0 }
    }

    pub fn is_silent(&self) -> bool {
        self.epsilon == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::config(format!("noise strength must be >= 0, got {}", self.epsilon)));
        }
        Ok(())
    }

    /// Same strength, independent stream derived from this seed.
    pub fn fork(&self, stream: u64) -> NoiseModel {
        NoiseModel { epsilon: self.epsilon, seed: derive_seed(self.seed, stream) }
    }

    pub fn channel(&self) -> NoiseChannel {
        NoiseChannel { epsilon: self.epsilon, rng: ChaCha8Rng::seed_from_u64(self.seed) }
    }
}

/// SplitMix64 finalizer over `root` and `stream`.
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    let mut z = root ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateful sampler for one run; draws fresh factors on every call.
#[derive(Debug, Clone)]
pub struct NoiseChannel {
    epsilon: f64,
    rng: ChaCha8Rng,
}

impl NoiseChannel {
    /// Multiplies every amplitude (interior and exterior) by its own
    /// `1 + z`. The state is not renormalized. A zero-strength channel
    /// leaves the state untouched.
    pub fn apply(&mut self, psi: &mut StateVector) {
        if self.epsilon == 0.0 {
            return;
        }
        let sigma = self.epsilon / std::f64::consts::SQRT_2;
        for a in psi.amplitudes_mut() {
            let re: f64 = StandardNormal.sample(&mut self.rng);
            let im: f64 = StandardNormal.sample(&mut self.rng);
            *a *= C64::new(1.0 + sigma * re, sigma * im);
        }
    }
}

/// One application of a freshly seeded channel.
pub fn apply_noise(psi: &StateVector, noise: &NoiseModel) -> StateVector {
    let mut out = psi.clone();
    noise.channel().apply(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Sector;

    fn state() -> StateVector {
        let s = Sector::One { half_extent: 10 };
        let amps = (0..21).map(|i| C64::new(1.0 + i as f64, -0.5 * i as f64)).collect();
        StateVector::from_amplitudes(s, amps).unwrap()
    }

    #[test]
    fn zero_strength_is_identity() {
        let psi = state();
        assert_eq!(apply_noise(&psi, &NoiseModel::new(0.0, 3)), psi);
    }

    #[test]
    fn seeded_noise_reproduces() {
        let psi = state();
        let a = apply_noise(&psi, &NoiseModel::new(0.05, 11));
        let b = apply_noise(&psi, &NoiseModel::new(0.05, 11));
        let c = apply_noise(&psi, &NoiseModel::new(0.05, 12));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn forks_are_distinct() {
        let root = NoiseModel::new(0.05, 1);
        assert_ne!(root.fork(0).seed, root.fork(1).seed);
        assert_eq!(root.fork(4), root.fork(4));
    }

    #[test]
    fn negative_strength_rejected() {
        assert!(NoiseModel::new(-0.1, 0).validate().is_err());
    }
}
