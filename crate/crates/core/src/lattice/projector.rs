use super::sector::{Ket, Sector};
use super::state::StateVector;
use crate::{Error, Result};

/// Diagonal 0/1 projector onto kets with every particle inside `|n| <= R`.
///
/// Physically this is post-selection on all exterior qubits reading `|0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorProjector {
    sector: Sector,
    radius: usize,
    keep: Vec<bool>,
}

impl InteriorProjector {
    pub fn new(sector: Sector, radius: usize) -> Result<Self> {
        if radius >= sector.half_extent() {
            return Err(Error::config(format!(
                "interior radius {radius} must be smaller than the half extent {}",
                sector.half_extent()
            )));
        }
        let r = radius as u64;
        let keep = (0..sector.dim())
            .map(|i| match sector.ket(i) {
                Ket::One(n) => n.unsigned_abs() <= r,
                Ket::Two(n1, n2) => n1.unsigned_abs().max(n2.unsigned_abs()) <= r,
            })
            .collect();
        Ok(InteriorProjector { sector, radius, keep })
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn keeps(&self, index: usize) -> bool {
        self.keep[index]
    }

    /// `2R + 1` for one particle, `(2R + 1)^2` for two.
    pub fn interior_dim(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }

    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        let mut out = psi.clone();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    pub fn apply_in_place(&self, psi: &mut StateVector) -> Result<()> {
        if psi.sector() != self.sector {
            return Err(Error::Dimension { expected: self.sector.dim(), found: psi.dim() });
        }
        for (a, &k) in psi.amplitudes_mut().iter_mut().zip(&self.keep) {
            if !k {
                *a = crate::C64::new(0.0, 0.0);
            }
        }
        Ok(())
    }

    /// `<psi|P|psi>`.
    pub fn weight(&self, psi: &StateVector) -> f64 {
        psi.amplitudes().iter().zip(&self.keep).filter(|(_, &k)| k).map(|(a, _)| a.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_dimensions() {
        let p1 = InteriorProjector::new(Sector::One { half_extent: 25 }, 5).unwrap();
        let p2 = InteriorProjector::new(Sector::Two { half_extent: 25 }, 5).unwrap();
        assert_eq!(p1.interior_dim(), 11);
        assert_eq!(p2.interior_dim(), 121);
    }

    #[test]
    fn one_particle_cut() {
        let s = Sector::One { half_extent: 8 };
        let p = InteriorProjector::new(s, 5).unwrap();
        let six = StateVector::basis(s, Ket::One(6)).unwrap();
        let five = StateVector::basis(s, Ket::One(5)).unwrap();
        assert_eq!(p.apply(&six).unwrap().norm(), 0.0);
        assert_eq!(p.apply(&five).unwrap(), five);
    }

    #[test]
    fn two_particle_max_norm_cut() {
        let s = Sector::Two { half_extent: 7 };
        let p = InteriorProjector::new(s, 5).unwrap();
        assert!(p.keeps(s.index(Ket::Two(3, -5)).unwrap()));
        assert!(!p.keeps(s.index(Ket::Two(3, 6)).unwrap()));
    }

    #[test]
    fn radius_one_below_extent_drops_only_boundary() {
        let s = Sector::One { half_extent: 4 };
        let p = InteriorProjector::new(s, 3).unwrap();
        let dropped: Vec<usize> = (0..s.dim()).filter(|&i| !p.keeps(i)).collect();
        assert_eq!(dropped, vec![0, 8]);
    }

    #[test]
    fn radius_must_be_inside_extent() {
        assert!(InteriorProjector::new(Sector::One { half_extent: 5 }, 5).is_err());
    }
}
