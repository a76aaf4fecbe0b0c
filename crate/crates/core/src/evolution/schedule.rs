use serde::{Deserialize, Serialize};

use crate::lattice::{build_kinetic, build_potential, trotter_parts, ModelSpec, OperatorTag, SectorOperator};
use crate::{Error, Result};

pub const DEFAULT_KAPPA: f64 = 10.0;
pub const DEFAULT_TAU: f64 = 3.6;

fn default_kappa() -> f64 {
    DEFAULT_KAPPA
}

fn default_tau() -> f64 {
    DEFAULT_TAU
}

/// Time dependence of the Hamiltonian.
///
/// Every schedule has the form `H(t) = k(t) K + g(t) (V + W)` with the
/// model's static kinetic and interaction operators:
///
/// * `Static`: `k = g = 1`.
/// * `Adiabatic`: `k = t / t_F` (held at 1 after `t_F`), `g = 1`, so the
///   kinetic term is ramped on linearly from zero.
/// * `ProjectedCooling`: `H(t) = (kappa K - H) e^{-t/tau} + H`, i.e.
///   `k = 1 + (kappa - 1) e^{-t/tau}` and `g = 1 - e^{-t/tau}`. The start is
///   pure kinetic `kappa K`, which pushes excited bound states into the
///   continuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleKind {
    Static,
    Adiabatic {
        final_time: f64,
    },
    ProjectedCooling {
        #[serde(default = "default_kappa")]
        kappa: f64,
        #[serde(default = "default_tau")]
        tau: f64,
    },
}

/// Multipliers on the static kinetic and interaction operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub kinetic: f64,
    pub interaction: f64,
}

impl ScheduleKind {
    pub const fn projected_cooling() -> Self {
        ScheduleKind::ProjectedCooling { kappa: DEFAULT_KAPPA, tau: DEFAULT_TAU }
    }

    pub fn is_static(&self) -> bool {
        matches!(self, ScheduleKind::Static)
    }

    pub fn coefficients(&self, t: f64) -> Coefficients {
        match *self {
            ScheduleKind::Static => Coefficients { kinetic: 1.0, interaction: 1.0 },
            ScheduleKind::Adiabatic { final_time } => {
                Coefficients { kinetic: (t / final_time).min(1.0), interaction: 1.0 }
            }
            ScheduleKind::ProjectedCooling { kappa, tau } => {
                let decay = (-t / tau).exp();
                Coefficients { kinetic: 1.0 + (kappa - 1.0) * decay, interaction: 1.0 - decay }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ScheduleKind::Static => Ok(()),
            ScheduleKind::Adiabatic { final_time } if !(final_time.is_finite() && final_time > 0.0) => {
                Err(Error::config(format!("adiabatic final time must be positive, got {final_time}")))
            }
            ScheduleKind::ProjectedCooling { kappa, tau }
                if !(kappa.is_finite() && kappa > 0.0 && tau.is_finite() && tau > 0.0) =>
            {
                Err(Error::config(format!("projected cooling needs kappa > 0 and tau > 0, got {kappa}, {tau}")))
            }
            _ => Ok(()),
        }
    }
}

/// A schedule bound to a model, holding the static operators it mixes.
#[derive(Debug, Clone)]
pub struct Schedule {
    kind: ScheduleKind,
    spec: ModelSpec,
    kinetic: SectorOperator,
    interaction: SectorOperator,
    target: SectorOperator,
    parts: Vec<SectorOperator>,
}

impl Schedule {
    pub fn new(spec: &ModelSpec, kind: ScheduleKind) -> Result<Self> {
        kind.validate()?;
        let kinetic = build_kinetic(spec)?;
        let interaction = build_potential(spec)?;
        let target = SectorOperator::sum(OperatorTag::Composite, &[&kinetic, &interaction])?;
        let parts = trotter_parts(spec)?;
        Ok(Schedule { kind, spec: spec.clone(), kinetic, interaction, target, parts })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// The static Hamiltonian whose ground state is sought.
    pub fn target_hamiltonian(&self) -> &SectorOperator {
        &self.target
    }

    pub fn kinetic(&self) -> &SectorOperator {
        &self.kinetic
    }

    pub fn interaction(&self) -> &SectorOperator {
        &self.interaction
    }

    pub fn coefficients(&self, t: f64) -> Coefficients {
        self.kind.coefficients(t)
    }

    pub fn hamiltonian_at(&self, t: f64) -> Result<SectorOperator> {
        self.hamiltonian_with(self.coefficients(t))
    }

    pub fn hamiltonian_with(&self, c: Coefficients) -> Result<SectorOperator> {
        SectorOperator::linear_combination(
            OperatorTag::Composite,
            &[(c.kinetic, &self.kinetic), (c.interaction, &self.interaction)],
        )
    }

    /// Product-formula pieces of `H(t)`, in the same order as
    /// [`trotter_parts`].
    pub fn trotter_parts_at(&self, t: f64) -> Vec<SectorOperator> {
        self.trotter_parts_with(self.coefficients(t))
    }

    pub fn trotter_parts_with(&self, c: Coefficients) -> Vec<SectorOperator> {
        self.parts
            .iter()
            .map(|p| match p.tag() {
                OperatorTag::Potential | OperatorTag::Coupling => p.scaled(c.interaction),
                _ => p.scaled(c.kinetic),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projected_cooling_starts_as_scaled_kinetic() {
        let spec = ModelSpec::model_1b(25, 5);
        let s = Schedule::new(&spec, ScheduleKind::projected_cooling()).unwrap();
        let h0 = s.hamiltonian_at(0.0).unwrap();
        assert_eq!(h0.max_abs_diff(&s.kinetic().scaled(10.0)).unwrap(), 0.0);
    }

    #[test]
    fn projected_cooling_relaxes_to_target() {
        let spec = ModelSpec::model_2(4, 2);
        let s = Schedule::new(&spec, ScheduleKind::projected_cooling()).unwrap();
        let late = s.hamiltonian_at(20.0 * DEFAULT_TAU).unwrap();
        let gap = SectorOperator::linear_combination(
            OperatorTag::Composite,
            &[(10.0, s.kinetic()), (-1.0, s.target_hamiltonian())],
        )
        .unwrap();
        let scale = gap.max_abs_diff(&gap.scaled(0.0)).unwrap();
        let bound = (-20.0f64).exp() * scale;
        assert!(late.max_abs_diff(s.target_hamiltonian()).unwrap() <= bound * (1.0 + 1e-9) + 1e-15);
    }

    #[test]
    fn adiabatic_endpoints() {
        let spec = ModelSpec::model_1b(10, 5);
        let s = Schedule::new(&spec, ScheduleKind::Adiabatic { final_time: 3.0 }).unwrap();
        let h0 = s.hamiltonian_at(0.0).unwrap();
        assert_eq!(h0.max_abs_diff(s.interaction()).unwrap(), 0.0);
        let hf = s.hamiltonian_at(3.0).unwrap();
        assert_eq!(hf.max_abs_diff(s.target_hamiltonian()).unwrap(), 0.0);
        let beyond = s.hamiltonian_at(7.0).unwrap();
        assert_eq!(beyond.max_abs_diff(s.target_hamiltonian()).unwrap(), 0.0);
    }

    #[test]
    fn scheduled_parts_sum_to_scheduled_hamiltonian() {
        let spec = ModelSpec::model_2(5, 2);
        let s = Schedule::new(&spec, ScheduleKind::projected_cooling()).unwrap();
        for t in [0.3, 1.7, 9.0] {
            let parts = s.trotter_parts_at(t);
            let refs: Vec<&SectorOperator> = parts.iter().collect();
            let sum = SectorOperator::sum(OperatorTag::Composite, &refs).unwrap();
            assert!(sum.max_abs_diff(&s.hamiltonian_at(t).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(ScheduleKind::Adiabatic { final_time: 0.0 }.validate().is_err());
        assert!(ScheduleKind::ProjectedCooling { kappa: 10.0, tau: -1.0 }.validate().is_err());
    }

    #[test]
    fn kind_toml_defaults() {
        #[derive(Deserialize)]
        struct Wrap {
            schedule: ScheduleKind,
        }
        let w: Wrap = toml::from_str("[schedule]\nkind = \"projected_cooling\"\n").unwrap();
        assert_eq!(w.schedule, ScheduleKind::projected_cooling());
    }
}
