use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::model::ModelSpec;
use super::operator::{OperatorTag, SectorOperator};
use super::projector::InteriorProjector;
use super::sector::{Ket, Parity, Sector};
use super::state::StateVector;
use crate::{Error, Result, C64};

/// `s * K` on the model's sector.
pub fn build_kinetic(spec: &ModelSpec) -> Result<SectorOperator> {
    spec.validate()?;
    Ok(spec.sector().kinetic(spec.kinetic_scale))
}

/// Diagonal interaction: `V_n` for one particle, `V_n1 + V_n2 + W_n1n2` for two.
pub fn build_potential(spec: &ModelSpec) -> Result<SectorOperator> {
    spec.validate()?;
    let sector = spec.sector();
    let diag = (0..sector.dim())
        .map(|i| match sector.ket(i) {
            Ket::One(n) => spec.potential_at(n),
            Ket::Two(n1, n2) => spec.potential_at(n1) + spec.potential_at(n2) + spec.coupling_at(n1, n2),
        })
        .collect();
    SectorOperator::diagonal(OperatorTag::Potential, sector, diag)
}

pub fn build_hamiltonian(spec: &ModelSpec) -> Result<SectorOperator> {
    let k = build_kinetic(spec)?;
    let v = build_potential(spec)?;
    SectorOperator::sum(OperatorTag::Composite, &[&k, &v])
}

/// Splits `H` into exactly exponentiable pieces, in the order the factors
/// appear in the product formula (the last piece acts first):
///
/// * one chain: `[A, B, D, V]`
/// * two chains: `[A1, B1, A2, B2, D, V, W]`
///
/// `A` holds the kinetic bonds whose lower site is even, `B` those whose
/// lower site is odd, and `D` the kinetic diagonal. Within `A` or `B` no two
/// bonds share a site.
pub fn trotter_parts(spec: &ModelSpec) -> Result<Vec<SectorOperator>> {
    spec.validate()?;
    let sector = spec.sector();
    let s = spec.kinetic_scale;
    let hop = -0.5 * s;
    let n = sector.dim();
    let bonds = |particle: usize, parity: Parity, tag: OperatorTag| {
        SectorOperator::sparse(tag, sector, vec![0.0; n], sector.hopping_bonds(particle, Some(parity), hop))
    };
    let kinetic_diag = SectorOperator::sparse(
        OperatorTag::KineticDiagonal,
        sector,
        vec![s * sector.particles() as f64; n],
        Vec::new(),
    );
    match sector {
        Sector::One { .. } => Ok(vec![
            bonds(0, Parity::Even, OperatorTag::EvenBonds(None)),
            bonds(0, Parity::Odd, OperatorTag::OddBonds(None)),
            kinetic_diag,
            build_potential(spec)?,
        ]),
        Sector::Two { .. } => {
            let mut single = Vec::with_capacity(n);
            let mut pair = Vec::with_capacity(n);
            for i in 0..n {
                let Ket::Two(n1, n2) = sector.ket(i) else { unreachable!() };
                single.push(spec.potential_at(n1) + spec.potential_at(n2));
                pair.push(spec.coupling_at(n1, n2));
            }
            Ok(vec![
                bonds(0, Parity::Even, OperatorTag::EvenBonds(Some(0))),
                bonds(0, Parity::Odd, OperatorTag::OddBonds(Some(0))),
                bonds(1, Parity::Even, OperatorTag::EvenBonds(Some(1))),
                bonds(1, Parity::Odd, OperatorTag::OddBonds(Some(1))),
                kinetic_diag,
                SectorOperator::diagonal(OperatorTag::Potential, sector, single)?,
                SectorOperator::diagonal(OperatorTag::Coupling, sector, pair)?,
            ])
        }
    }
}

pub fn build_projector(spec: &ModelSpec) -> Result<InteriorProjector> {
    spec.validate()?;
    InteriorProjector::new(spec.sector(), spec.interior_radius)
}

/// Initial-state families supported by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialKind {
    /// All amplitude on the origin, `|[0]>` or `|[0, 0]>`.
    Point,
    /// Smeared state around the origin, renormalized.
    Spread,
    /// Independent complex Gaussian amplitudes on every interior ket.
    Random { seed: u64 },
}

const SPREAD_ONE: [(i64, f64); 5] = [(-2, 0.26), (-1, 0.43), (0, 0.75), (1, 0.43), (2, 0.26)];
const SPREAD_TWO: [((i64, i64), f64); 5] =
    [((0, 0), 0.81), ((1, 0), 0.30), ((-1, 0), 0.30), ((0, 1), 0.30), ((0, -1), 0.30)];

/// Unit-norm initial state supported inside the interior region.
pub fn initial_state(spec: &ModelSpec, kind: InitialKind) -> Result<StateVector> {
    let projector = build_projector(spec)?;
    let sector = spec.sector();
    let psi = match kind {
        InitialKind::Point => match sector {
            Sector::One { .. } => StateVector::basis(sector, Ket::One(0))?,
            Sector::Two { .. } => StateVector::basis(sector, Ket::Two(0, 0))?,
        },
        InitialKind::Spread => {
            let terms: Vec<(Ket, f64)> = match sector {
                Sector::One { .. } => SPREAD_ONE.iter().map(|&(n, c)| (Ket::One(n), c)).collect(),
                Sector::Two { .. } => SPREAD_TWO.iter().map(|&((a, b), c)| (Ket::Two(a, b), c)).collect(),
            };
            let mut psi = StateVector::zeros(sector);
            for (ket, c) in terms {
                let i = sector
                    .index(ket)
                    .filter(|&i| projector.keeps(i))
                    .ok_or_else(|| Error::config("spread initial state does not fit inside the interior region"))?;
                psi.amplitudes_mut()[i] = C64::new(c, 0.0);
            }
            psi.normalized()?
        }
        InitialKind::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut psi = StateVector::zeros(sector);
            let interior: Vec<usize> = projector.interior_indices().collect();
            for i in interior {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                psi.amplitudes_mut()[i] = C64::new(re, im);
            }
            psi.normalized()?
        }
    };
    Ok(psi)
}
