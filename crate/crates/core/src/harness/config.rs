use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::evolution::{Method, NoiseModel, ScheduleKind, TimeGrid};
use crate::lattice::{Coupling, InitialKind, ModelSpec, Preset};
use crate::{Error, Result};

pub const DEFAULT_HALF_EXTENT: usize = 25;
pub const DEFAULT_INTERIOR_RADIUS: usize = 5;
pub const DEFAULT_DT: f64 = 0.3;
pub const DEFAULT_STEPS: usize = 40;
pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_NOISE_SEEDS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Fig1,
    Fig2a,
    Fig2b,
    Fig3,
    Custom,
}

impl Experiment {
    pub fn label(&self) -> &'static str {
        match self {
            Experiment::Fig1 => "fig1",
            Experiment::Fig2a => "fig2a",
            Experiment::Fig2b => "fig2b",
            Experiment::Fig3 => "fig3",
            Experiment::Custom => "custom",
        }
    }
}

fn default_half_extent() -> usize {
    DEFAULT_HALF_EXTENT
}

fn default_interior_radius() -> usize {
    DEFAULT_INTERIOR_RADIUS
}

fn default_scale() -> f64 {
    1.0
}

/// Model section of a config file: either a named preset or explicit
/// `chains` and `potential`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default = "default_half_extent")]
    pub half_extent: usize,
    #[serde(default = "default_interior_radius")]
    pub interior_radius: usize,
    #[serde(default = "default_scale")]
    pub kinetic_scale: f64,
    #[serde(default)]
    pub allow_reduced_kinetic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chains: Option<usize>,
    /// `[[site, value], ...]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<Vec<(i64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<Coupling>,
}

impl ModelConfig {
    pub fn preset(preset: Preset) -> Self {
        ModelConfig {
            preset: Some(preset),
            half_extent: DEFAULT_HALF_EXTENT,
            interior_radius: DEFAULT_INTERIOR_RADIUS,
            kinetic_scale: 1.0,
            allow_reduced_kinetic: false,
            chains: None,
            potential: None,
            coupling: None,
        }
    }

    pub fn to_spec(&self) -> Result<ModelSpec> {
        let mut spec = match (self.preset, self.chains, &self.potential) {
            (Some(p), None, None) => {
                if self.coupling.is_some() {
                    return Err(Error::config("a preset model cannot also set coupling"));
                }
                ModelSpec::preset(p, self.half_extent, self.interior_radius)
            }
            (Some(_), _, _) => return Err(Error::config("a preset model cannot also set chains or potential")),
            (None, Some(chains), potential) => {
                let mut map = std::collections::BTreeMap::new();
                for &(site, v) in potential.iter().flatten() {
                    if map.insert(site, v).is_some() {
                        return Err(Error::config(format!("potential site {site} given twice")));
                    }
                }
                ModelSpec {
                    chains,
                    half_extent: self.half_extent,
                    interior_radius: self.interior_radius,
                    kinetic_scale: 1.0,
                    allow_reduced_kinetic: false,
                    potential: map,
                    coupling: self.coupling.clone(),
                }
            }
            (None, None, _) => return Err(Error::config("model needs either preset or chains")),
        };
        spec.kinetic_scale = self.kinetic_scale;
        spec.allow_reduced_kinetic = self.allow_reduced_kinetic;
        spec.validate()?;
        Ok(spec)
    }
}

fn default_schedule() -> ScheduleKind {
    ScheduleKind::projected_cooling()
}

fn default_method() -> Method {
    Method::Full
}

fn default_initial() -> InitialKind {
    InitialKind::Point
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_seed() -> u64 {
    1
}

fn default_noise_seeds() -> usize {
    DEFAULT_NOISE_SEEDS
}

/// Every parameter of one experiment. Missing fields take the defaults
/// `R = 5`, `L = 25`, `dt = 0.3`, 40 steps, `epsilon = 0.05`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub model: ModelConfig,
    #[serde(default = "default_schedule")]
    pub schedule: ScheduleKind,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default = "default_initial")]
    pub initial: InitialKind,
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Steps per run (the largest `N_t` for sweeps).
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Strength of the noisy curves; `0` disables them.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Root seed; every random stream of the experiment derives from it.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Independent noise realizations per noisy curve.
    #[serde(default = "default_noise_seeds")]
    pub noise_seeds: usize,
    /// Emit the mean over realizations instead of the first realization.
    #[serde(default)]
    pub average_noise: bool,
    #[serde(default)]
    pub time_grid: TimeGrid,
    /// Replace `half_extent` by the reflection-free size for the run length.
    #[serde(default)]
    pub auto_size: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    fn base(experiment: Experiment, preset: Preset) -> Self {
        ExperimentConfig {
            experiment,
            model: ModelConfig::preset(preset),
            schedule: default_schedule(),
            method: Method::Full,
            initial: InitialKind::Point,
            dt: DEFAULT_DT,
            steps: DEFAULT_STEPS,
            epsilon: DEFAULT_EPSILON,
            seed: 1,
            noise_seeds: DEFAULT_NOISE_SEEDS,
            average_noise: false,
            time_grid: TimeGrid::End,
            auto_size: false,
            output_dir: None,
        }
    }

    /// Model 1A under its static Hamiltonian from random interior states,
    /// `t = 50` in steps of 0.25, lattice sized to avoid reflections.
    pub fn fig1() -> Self {
        ExperimentConfig {
            schedule: ScheduleKind::Static,
            initial: InitialKind::Random { seed: 1 },
            dt: 0.25,
            steps: 200,
            epsilon: 0.0,
            noise_seeds: 1,
            auto_size: true,
            ..Self::base(Experiment::Fig1, Preset::Model1A)
        }
    }

    pub fn fig2a() -> Self {
        Self::base(Experiment::Fig2a, Preset::Model1B)
    }

    pub fn fig2b() -> Self {
        Self::base(Experiment::Fig2b, Preset::Model2)
    }

    pub fn fig3() -> Self {
        ExperimentConfig { initial: InitialKind::Spread, epsilon: 0.0, ..Self::base(Experiment::Fig3, Preset::Model2) }
    }

    pub fn for_experiment(experiment: Experiment) -> Self {
        match experiment {
            Experiment::Fig1 => Self::fig1(),
            Experiment::Fig2a => Self::fig2a(),
            Experiment::Fig2b => Self::fig2b(),
            Experiment::Fig3 => Self::fig3(),
            Experiment::Custom => Self::base(Experiment::Custom, Preset::Model1B),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.to_spec()?;
        self.schedule.validate()?;
        NoiseModel::new(self.epsilon, self.seed).validate()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::config("steps must be at least 1"));
        }
        if self.epsilon > 0.0 && self.noise_seeds == 0 {
            return Err(Error::config("noisy runs need noise_seeds >= 1"));
        }
        let needs_two = matches!(self.experiment, Experiment::Fig2b | Experiment::Fig3);
        let spec = self.model.to_spec()?;
        if needs_two && spec.chains != 2 {
            return Err(Error::config(format!("{} needs a two-chain model", self.experiment.label())));
        }
        if matches!(self.experiment, Experiment::Fig1 | Experiment::Fig2a) && spec.chains != 1 {
            return Err(Error::config(format!("{} needs a single-chain model", self.experiment.label())));
        }
        Ok(())
    }

    /// Total evolved time `steps * dt`.
    pub fn duration(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    /// The model, resized when `auto_size` is set.
    pub fn spec(&self) -> Result<ModelSpec> {
        let spec = self.model.to_spec()?;
        if !self.auto_size {
            return Ok(spec);
        }
        let travel = crate::evolution::kinetic_travel(self.schedule, spec.kinetic_scale, self.duration());
        let l = crate::evolution::reflection_free_half_extent(spec.interior_radius, travel);
        let sized = spec.with_half_extent(l);
        sized.validate()?;
        Ok(sized)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_parameters() {
        let c = ExperimentConfig::fig2a();
        let spec = c.spec().unwrap();
        assert_eq!((spec.half_extent, spec.interior_radius), (25, 5));
        assert_eq!((c.dt, c.steps, c.epsilon), (0.3, 40, 0.05));
    }

    #[test]
    fn round_trips_through_toml() {
        for e in [Experiment::Fig1, Experiment::Fig2a, Experiment::Fig2b, Experiment::Fig3, Experiment::Custom] {
            let c = ExperimentConfig::for_experiment(e);
            let text = c.to_toml_string().unwrap();
            assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), c, "{text}");
        }
    }

    #[test]
    fn minimal_file_fills_defaults() {
        let c = ExperimentConfig::from_toml_str("experiment = \"custom\"\n[model]\npreset = \"model_1b\"\n").unwrap();
        assert_eq!(c.schedule, ScheduleKind::projected_cooling());
        assert_eq!(c.model.half_extent, 25);
    }

    #[test]
    fn explicit_model() {
        let text =
            "experiment = \"custom\"\n[model]\nchains = 1\nhalf_extent = 10\npotential = [[0, -1.0], [1, -0.5]]\n";
        let spec = ExperimentConfig::from_toml_str(text).unwrap().spec().unwrap();
        assert_eq!(spec.potential_at(1), -0.5);
    }

    #[test]
    fn configuration_errors() {
        let bad = [
            "experiment = \"custom\"\n[model]\npreset = \"model_1b\"\ndt = 0.3\n",
            "experiment = \"custom\"\ndt = -1.0\n[model]\npreset = \"model_1b\"\n",
            "experiment = \"custom\"\n[model]\npreset = \"model_1b\"\nchains = 2\n",
            "experiment = \"fig2b\"\n[model]\npreset = \"model_1b\"\n",
            "experiment = \"custom\"\nbogus = 1\n[model]\npreset = \"model_1a\"\n",
            "experiment = \"custom\"\n[model]\nchains = 1\npotential = [[0, -1.0], [0, -2.0]]\n",
        ];
        for text in bad {
            assert!(ExperimentConfig::from_toml_str(text).unwrap_err().is_configuration(), "{text}");
        }
    }

    #[test]
    fn fig1_is_auto_sized() {
        let spec = ExperimentConfig::fig1().spec().unwrap();
        assert!(spec.half_extent >= 5 + 50 + 5);
    }
}
