use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::operator::{Bond, OperatorTag, SectorOperator};

/// Fixed-particle-number position basis on one chain or two linked chains.
///
/// Sites run over `-L..=L`. The one-particle basis is ordered by site; the
/// two-particle basis stores the full product basis (one distinguishable
/// particle per chain) in row-major order with the first particle's site as
/// the slow index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "particles", rename_all = "snake_case")]
pub enum Sector {
    One { half_extent: usize },
    Two { half_extent: usize },
}

/// A position-basis ket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ket {
    One(i64),
    Two(i64, i64),
}

/// Whether the lower site of a nearest-neighbor bond is even or odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(site: i64) -> Self {
        if site.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl Sector {
    pub fn half_extent(&self) -> usize {
        match *self {
            Sector::One { half_extent } | Sector::Two { half_extent } => half_extent,
        }
    }

    pub fn particles(&self) -> usize {
        match self {
            Sector::One { .. } => 1,
            Sector::Two { .. } => 2,
        }
    }

    /// Sites per chain, `2L + 1`.
    pub fn sites(&self) -> usize {
        2 * self.half_extent() + 1
    }

    pub fn dim(&self) -> usize {
        self.sites().pow(self.particles() as u32)
    }

    pub fn site_range(&self) -> RangeInclusive<i64> {
        let l = self.half_extent() as i64;
        -l..=l
    }

    pub fn contains_site(&self, site: i64) -> bool {
        site.unsigned_abs() <= self.half_extent() as u64
    }

    fn offset(&self, site: i64) -> Option<usize> {
        self.contains_site(site).then(|| (site + self.half_extent() as i64) as usize)
    }

    pub fn index(&self, ket: Ket) -> Option<usize> {
        match (self, ket) {
            (Sector::One { .. }, Ket::One(n)) => self.offset(n),
            (Sector::Two { .. }, Ket::Two(n1, n2)) => Some(self.offset(n1)? * self.sites() + self.offset(n2)?),
            _ => None,
        }
    }

    /// Inverse of [`Sector::index`]. Panics if `index >= dim()`.
    pub fn ket(&self, index: usize) -> Ket {
        assert!(index < self.dim(), "basis index {index} out of range");
        let l = self.half_extent() as i64;
        match self {
            Sector::One { .. } => Ket::One(index as i64 - l),
            Sector::Two { .. } => {
                let s = self.sites();
                Ket::Two((index / s) as i64 - l, (index % s) as i64 - l)
            }
        }
    }

    /// Index of the ket with the two particles' sites exchanged.
    pub(crate) fn exchanged(&self, index: usize) -> usize {
        match self {
            Sector::One { .. } => index,
            Sector::Two { .. } => {
                let s = self.sites();
                (index % s) * s + index / s
            }
        }
    }

    /// Nearest-neighbor hopping bonds of the given particle (0 or 1) whose
    /// lower site has the given parity, each with matrix element `value`.
    pub(crate) fn hopping_bonds(&self, particle: usize, parity: Option<Parity>, value: f64) -> Vec<Bond> {
        let l = self.half_extent() as i64;
        let lower_sites = (-l..l).filter(|&n| parity.is_none_or(|p| Parity::of(n) == p));
        match self {
            Sector::One { .. } => lower_sites
                .map(|n| {
                    let lo = self.offset(n).unwrap();
                    Bond { lo, hi: lo + 1, value }
                })
                .collect(),
            Sector::Two { .. } => {
                let s = self.sites();
                let lower: Vec<i64> = lower_sites.collect();
                let mut bonds = Vec::with_capacity(lower.len() * s);
                for n in lower {
                    let a = self.offset(n).unwrap();
                    for other in 0..s {
                        let (lo, hi) = if particle == 0 {
                            (a * s + other, (a + 1) * s + other)
                        } else {
                            (other * s + a, other * s + a + 1)
                        };
                        bonds.push(Bond { lo, hi, value });
                    }
                }
                bonds.sort_by_key(|b| (b.lo, b.hi));
                bonds
            }
        }
    }

    /// Kinetic operator `scale * K`, with `K` the open-chain lattice
    /// Laplacian (1 on the diagonal, -1/2 between neighbors) summed over
    /// particles.
    pub fn kinetic(&self, scale: f64) -> SectorOperator {
        let diag = vec![scale * self.particles() as f64; self.dim()];
        let mut bonds = self.hopping_bonds(0, None, -0.5 * scale);
        if self.particles() == 2 {
            bonds.extend(self.hopping_bonds(1, None, -0.5 * scale));
            bonds.sort_by_key(|b| (b.lo, b.hi));
        }
        SectorOperator::sparse(OperatorTag::Kinetic, *self, diag, bonds)
    }
}
