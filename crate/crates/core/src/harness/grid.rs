use std::path::{Path, PathBuf};
use std::thread;

use serde::{Deserialize, Serialize};

use super::config::{Experiment, ExperimentConfig};
use super::figures::run_custom;
use super::report::RunSummary;
use super::table::{write_atomic, Table, MANIFEST_FORMAT};
use crate::evolution::ScheduleKind;
use crate::{Error, Result};

/// Values to scan; an empty axis keeps the base value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxes {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dt: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub epsilon: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kinetic_scale: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kappa: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tau: Vec<f64>,
}

/// A base run and the axes scanned around it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub base: ExperimentConfig,
    #[serde(default)]
    pub grid: GridAxes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub dt: f64,
    pub steps: usize,
    pub epsilon: f64,
    pub kinetic_scale: f64,
    pub kappa: Option<f64>,
    pub tau: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GridReport {
    pub config: GridConfig,
    pub points: Vec<(GridPoint, RunSummary)>,
}

pub const GRID_COLUMNS: [&str; 9] =
    ["point", "dt", "steps", "epsilon", "kinetic_scale", "kappa", "tau", "final_overlap", "max_overlap"];

fn axis<T: Copy>(values: &[T], base: T) -> Vec<T> {
    if values.is_empty() {
        vec![base]
    } else {
        values.to_vec()
    }
}

impl GridConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: GridConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.base.experiment != Experiment::Custom {
            return Err(Error::config("sweep base must be a custom experiment"));
        }
        let cooling = matches!(self.base.schedule, ScheduleKind::ProjectedCooling { .. });
        if !cooling && !(self.grid.kappa.is_empty() && self.grid.tau.is_empty()) {
            return Err(Error::config("kappa and tau axes need a projected-cooling base schedule"));
        }
        for cfg in self.configs()? {
            cfg.validate()?;
        }
        Ok(())
    }

    /// Cartesian product of the axes in row-major order (dt slowest).
    pub fn points(&self) -> Vec<GridPoint> {
        let b = &self.base;
        let (kappa0, tau0) = match b.schedule {
            ScheduleKind::ProjectedCooling { kappa, tau } => (Some(kappa), Some(tau)),
            _ => (None, None),
        };
        let mut out = Vec::new();
        for &dt in &axis(&self.grid.dt, b.dt) {
            for &steps in &axis(&self.grid.steps, b.steps) {
                for &epsilon in &axis(&self.grid.epsilon, b.epsilon) {
                    for &kinetic_scale in &axis(&self.grid.kinetic_scale, b.model.kinetic_scale) {
                        for &kappa in &axis(&self.grid.kappa.iter().map(|&k| Some(k)).collect::<Vec<_>>(), kappa0) {
                            for &tau in &axis(&self.grid.tau.iter().map(|&t| Some(t)).collect::<Vec<_>>(), tau0) {
                                out.push(GridPoint { dt, steps, epsilon, kinetic_scale, kappa, tau });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn configs(&self) -> Result<Vec<ExperimentConfig>> {
        Ok(self.points().into_iter().map(|p| self.config_at(p)).collect())
    }

    fn config_at(&self, p: GridPoint) -> ExperimentConfig {
        let mut c = self.base.clone();
        c.dt = p.dt;
        c.steps = p.steps;
        c.epsilon = p.epsilon;
        c.model.kinetic_scale = p.kinetic_scale;
        if let (Some(kappa), Some(tau)) = (p.kappa, p.tau) {
            c.schedule = ScheduleKind::ProjectedCooling { kappa, tau };
        }
        c
    }
}

/// Runs every grid point, spreading them over the available cores.
/// Results are ordered by point index regardless of scheduling.
pub fn run_grid(config: &GridConfig) -> Result<GridReport> {
    config.validate()?;
    let points = config.points();
    let configs = config.configs()?;
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(configs.len()).max(1);
    let mut summaries: Vec<Option<Result<RunSummary>>> = (0..configs.len()).map(|_| None).collect();
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let configs = &configs;
                s.spawn(move || {
                    (w..configs.len())
                        .step_by(workers)
                        .map(|i| {
                            let summary = run_custom(&configs[i])
                                .map(|r| r.artifacts[0].summary.expect("custom runs carry a summary"));
                            (i, summary)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, s) in h.join().expect("grid worker panicked") {
                summaries[i] = Some(s);
            }
        }
    });
    let points = points
        .into_iter()
        .zip(summaries)
        .map(|(p, s)| Ok((p, s.expect("every point is scheduled")?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridReport { config: config.clone(), points })
}

#[derive(Serialize)]
struct GridManifest<'a> {
    format: &'static str,
    experiment: &'static str,
    points: usize,
    sweep: &'a GridConfig,
}

impl GridReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&GRID_COLUMNS);
        for (i, (p, s)) in self.points.iter().enumerate() {
            t.rows.push(vec![
                i.into(),
                p.dt.into(),
                p.steps.into(),
                p.epsilon.into(),
                p.kinetic_scale.into(),
                p.kappa.into(),
                p.tau.into(),
                s.final_overlap.into(),
                s.max_overlap.into(),
            ]);
        }
        t
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let table = dir.join("sweep.csv");
        write_atomic(&table, self.table().render().as_bytes())?;
        let manifest = GridManifest {
            format: MANIFEST_FORMAT,
            experiment: "sweep",
            points: self.points.len(),
            sweep: &self.config,
        };
        let path = dir.join("manifest.toml");
        write_atomic(&path, toml::to_string(&manifest)?.as_bytes())?;
        Ok(vec![table, path])
    }
}
