use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sector::Sector;
use crate::{Error, Result};

/// Two-particle interaction `W(n1, n2)` between the particles on the two
/// chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coupling {
    /// `W(n1, n2) = strength` when `n1 == n2`, zero otherwise.
    Contact { strength: f64 },
    /// Explicit `(n1, n2, W)` entries; unlisted pairs are zero.
    Table { entries: Vec<(i64, i64, f64)> },
}

impl Coupling {
    pub fn value(&self, n1: i64, n2: i64) -> f64 {
        match self {
            Coupling::Contact { strength } => {
                if n1 == n2 {
                    *strength
                } else {
                    0.0
                }
            }
            Coupling::Table { entries } => {
                entries.iter().filter(|&&(a, b, _)| a == n1 && b == n2).map(|&(_, _, w)| w).sum()
            }
        }
    }
}

/// Declarative description of a lattice model.
///
/// Sites run over `-L..=L` on each chain; the interior region is
/// `|n| <= R` (single chain) or `max(|n1|, |n2|) <= R` (two chains).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    /// 1 for a single chain (one-particle sector), 2 for two linked chains
    /// (one particle per chain).
    pub chains: usize,
    pub half_extent: usize,
    pub interior_radius: usize,
    #[serde(default = "unit_scale")]
    pub kinetic_scale: f64,
    /// Must be set to use a kinetic scale below 1.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_reduced_kinetic: bool,
    /// Single-particle potential `V_n`, as `[site, energy]` pairs.
    #[serde(default, with = "site_pairs")]
    pub potential: BTreeMap<i64, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<Coupling>,
}

fn unit_scale() -> f64 {
    1.0
}

mod site_pairs {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<i64, f64>, s: S) -> Result<S::Ok, S::Error> {
        map.iter().map(|(&k, &v)| (k, v)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, f64>, D::Error> {
        let pairs = Vec::<(i64, f64)>::deserialize(d)?;
        let mut map = BTreeMap::new();
        for (site, value) in pairs {
            if map.insert(site, value).is_some() {
                return Err(D::Error::custom(format!("potential lists site {site} twice")));
            }
        }
        Ok(map)
    }
}

/// Named presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Single attractive delta at the origin; one bound state.
    #[serde(rename = "model_1a")]
    Model1A,
    /// Four-site attractive well with four bound states.
    #[serde(rename = "model_1b")]
    Model1B,
    /// Two linked chains with on-site single-particle potential and a
    /// same-site inter-chain attraction.
    #[serde(rename = "model_2")]
    Model2,
}

impl ModelSpec {
    /// Preset constants on `-L..=L`; potential sites beyond the lattice are
    /// dropped.
    pub fn preset(preset: Preset, half_extent: usize, interior_radius: usize) -> Self {
        let (chains, potential, coupling): (usize, &[(i64, f64)], _) = match preset {
            Preset::Model1A => (1, &[(0, -1.0)], None),
            Preset::Model1B => (1, &[(-2, -1.4), (0, -1.6), (2, -1.5), (3, -1.5)], None),
            Preset::Model2 => (
                2,
                &[(-1, -0.3), (0, -1.0), (1, 0.2), (2, -0.9), (3, -0.9)],
                Some(Coupling::Contact { strength: -0.2 }),
            ),
        };
        ModelSpec {
            chains,
            half_extent,
            interior_radius,
            kinetic_scale: 1.0,
            allow_reduced_kinetic: false,
            potential: potential.iter().copied().filter(|(n, _)| n.unsigned_abs() as usize <= half_extent).collect(),
            coupling,
        }
    }

    pub fn model_1a(half_extent: usize, interior_radius: usize) -> Self {
        Self::preset(Preset::Model1A, half_extent, interior_radius)
    }

    pub fn model_1b(half_extent: usize, interior_radius: usize) -> Self {
        Self::preset(Preset::Model1B, half_extent, interior_radius)
    }

    pub fn model_2(half_extent: usize, interior_radius: usize) -> Self {
        Self::preset(Preset::Model2, half_extent, interior_radius)
    }

    pub fn with_kinetic_scale(mut self, scale: f64) -> Self {
        self.kinetic_scale = scale;
        self
    }

    pub fn with_half_extent(mut self, half_extent: usize) -> Self {
        self.half_extent = half_extent;
        self
    }

    pub fn sector(&self) -> Sector {
        match self.chains {
            2 => Sector::Two { half_extent: self.half_extent },
            _ => Sector::One { half_extent: self.half_extent },
        }
    }

    pub fn potential_at(&self, site: i64) -> f64 {
        self.potential.get(&site).copied().unwrap_or(0.0)
    }

    pub fn coupling_at(&self, n1: i64, n2: i64) -> f64 {
        self.coupling.as_ref().map_or(0.0, |c| c.value(n1, n2))
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.chains, 1 | 2) {
            return Err(Error::config(format!("chains must be 1 or 2, got {}", self.chains)));
        }
        if self.half_extent == 0 {
            return Err(Error::config("half extent L must be positive"));
        }
        if self.interior_radius == 0 || self.interior_radius >= self.half_extent {
            return Err(Error::config(format!(
                "need 0 < R < L, got R = {}, L = {}",
                self.interior_radius, self.half_extent
            )));
        }
        let s = self.kinetic_scale;
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::config(format!("kinetic scale must be positive, got {s}")));
        }
        if s < 1.0 && !self.allow_reduced_kinetic {
            return Err(Error::config(format!("kinetic scale {s} is below 1; set allow_reduced_kinetic to use it")));
        }
        let sector = self.sector();
        for (&site, &v) in &self.potential {
            if !sector.contains_site(site) {
                return Err(Error::config(format!("potential site {site} lies outside -L..=L")));
            }
            if !v.is_finite() {
                return Err(Error::config(format!("potential at site {site} is not finite")));
            }
        }
        match (&self.coupling, self.chains) {
            (Some(_), 1) => {
                return Err(Error::config("a coupling W needs two chains"));
            }
            (Some(Coupling::Contact { strength }), _) if !strength.is_finite() => {
                return Err(Error::config("coupling strength is not finite"));
            }
            (Some(Coupling::Table { entries }), _) => {
                for &(n1, n2, w) in entries {
                    if !(sector.contains_site(n1) && sector.contains_site(n2)) {
                        return Err(Error::config(format!("coupling entry ({n1}, {n2}) lies outside -L..=L")));
                    }
                    if !w.is_finite() {
                        return Err(Error::config(format!("coupling at ({n1}, {n2}) is not finite")));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}
