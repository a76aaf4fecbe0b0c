use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ExperimentConfig;
use super::table::{write_atomic, Table, MANIFEST_FORMAT};
use crate::evolution::StepRecord;
use crate::lattice::ModelSpec;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunSummary {
    pub final_overlap: f64,
    pub max_overlap: f64,
    /// First step at which the overlap reached the experiment's threshold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossing_step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_energy: Option<f64>,
}

impl RunSummary {
    /// Summary over steps `1..`; the initial record is excluded from the
    /// maximum and the crossing search.
    pub fn from_records(records: &[StepRecord], threshold: Option<f64>) -> Self {
        let last = records.last().expect("non-empty records");
        let evolved = if records.len() > 1 { &records[1..] } else { records };
        RunSummary {
            final_overlap: last.overlap,
            max_overlap: evolved.iter().map(|r| r.overlap).fold(0.0, f64::max),
            crossing_step: threshold.and_then(|t| evolved.iter().find(|r| r.overlap >= t).map(|r| r.step)),
            final_energy: last.energy,
        }
    }
}

/// One emitted data table with its summary.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifact {
    pub name: String,
    pub table: Table,
    pub summary: Option<RunSummary>,
}

impl RunArtifact {
    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }
}

/// A named pass/fail outcome with the quantity it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CheckOutcome {
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), passed: value >= threshold, value, threshold, detail: detail.into() }
    }

    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), passed: value <= threshold, value, threshold, detail: detail.into() }
    }

    pub fn above(name: impl Into<String>, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), passed: value > threshold, value, threshold, detail: detail.into() }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: value {} (threshold {})", self.name, Short(self.value), self.threshold)?;
        if !self.detail.is_empty() {
            write!(f, " [{}]", self.detail)?;
        }
        Ok(())
    }
}

struct Short(f64);

impl fmt::Display for Short {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.0;
        if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e6) {
            write!(f, "{v:.3e}")
        } else {
            write!(f, "{v:.6}")
        }
    }
}

/// Everything one experiment produced.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub spec: ModelSpec,
    pub artifacts: Vec<RunArtifact>,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Serialize)]
struct ManifestRun<'a> {
    name: &'a str,
    file: String,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    summary: Option<RunSummary>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    format: &'static str,
    experiment: &'static str,
    passed: bool,
    config: &'a ExperimentConfig,
    model: &'a ModelSpec,
    runs: Vec<ManifestRun<'a>>,
    checks: &'a [CheckOutcome],
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn artifact(&self, name: &str) -> Option<&RunArtifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }

    pub fn manifest(&self) -> Result<String> {
        let manifest = Manifest {
            format: MANIFEST_FORMAT,
            experiment: self.config.experiment.label(),
            passed: self.passed(),
            config: &self.config,
            model: &self.spec,
            runs: self
                .artifacts
                .iter()
                .map(|a| ManifestRun { name: &a.name, file: a.file_name(), summary: a.summary })
                .collect(),
            checks: &self.checks,
        };
        Ok(toml::to_string(&manifest)?)
    }

    /// Writes every table and `manifest.toml` into `dir`, each atomically.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.artifacts.len() + 1);
        for a in &self.artifacts {
            let path = dir.join(a.file_name());
            write_atomic(&path, a.table.render().as_bytes())?;
            written.push(path);
        }
        let path = dir.join("manifest.toml");
        write_atomic(&path, self.manifest()?.as_bytes())?;
        written.push(path);
        Ok(written)
    }
}
