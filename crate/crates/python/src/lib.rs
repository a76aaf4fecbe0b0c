//! Python bindings for the projected cooling simulator.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use projcool_core::analysis::count_localized_states;
use projcool_core::evolution::{evolve as run_evolve, Method, NoiseModel, ScheduleKind, Target};
use projcool_core::harness::{check_all, run_experiment, Experiment, ExperimentConfig, ExperimentReport};
use projcool_core::lattice::{build_hamiltonian, build_projector, InitialKind, ModelSpec, Preset};
use projcool_core::qubit::check_equivalence;
use projcool_core::{Error, C64};

fn py_err(e: Error) -> PyErr {
    if e.is_configuration() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn preset(name: &str) -> PyResult<Preset> {
    match name {
        "model_1a" => Ok(Preset::Model1A),
        "model_1b" => Ok(Preset::Model1B),
        "model_2" => Ok(Preset::Model2),
        _ => Err(PyValueError::new_err(format!("unknown model {name:?}; expected model_1a, model_1b or model_2"))),
    }
}

fn model(name: &str, half_extent: usize, interior_radius: usize, kinetic_scale: f64) -> PyResult<ModelSpec> {
    let mut spec = ModelSpec::preset(preset(name)?, half_extent, interior_radius);
    spec.kinetic_scale = kinetic_scale;
    spec.allow_reduced_kinetic = kinetic_scale < 1.0;
    spec.validate().map_err(py_err)?;
    Ok(spec)
}

fn experiment(name: &str) -> PyResult<Experiment> {
    match name {
        "fig1" => Ok(Experiment::Fig1),
        "fig2a" => Ok(Experiment::Fig2a),
        "fig2b" => Ok(Experiment::Fig2b),
        "fig3" => Ok(Experiment::Fig3),
        _ => Err(PyValueError::new_err(format!("unknown figure {name:?}"))),
    }
}

/// Tables, checks and manifest of one experiment.
#[pyclass(frozen, name = "Report", module = "projcool")]
struct PyReport {
    inner: ExperimentReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn experiment(&self) -> &'static str {
        self.inner.config.experiment.label()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    /// `(name, passed, value, threshold, detail)` per check.
    #[getter]
    fn checks(&self) -> Vec<(String, bool, f64, f64, String)> {
        self.inner.checks.iter().map(|c| (c.name.clone(), c.passed, c.value, c.threshold, c.detail.clone())).collect()
    }

    #[getter]
    fn table_names(&self) -> Vec<String> {
        self.inner.artifacts.iter().map(|a| a.name.clone()).collect()
    }

    /// Rendered CSV text of one table.
    fn table(&self, name: &str) -> PyResult<String> {
        self.inner
            .artifact(name)
            .map(|a| a.table.render())
            .ok_or_else(|| PyValueError::new_err(format!("no table named {name:?}")))
    }

    fn manifest(&self) -> PyResult<String> {
        self.inner.manifest().map_err(py_err)
    }

    /// Writes every table and the manifest into `directory`.
    fn write(&self, directory: PathBuf) -> PyResult<Vec<PathBuf>> {
        self.inner.write(&directory).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        let failed = self.inner.checks.iter().filter(|c| !c.passed).count();
        format!(
            "Report(experiment={:?}, tables={}, checks={}, failed={failed})",
            self.experiment(),
            self.inner.artifacts.len(),
            self.inner.checks.len()
        )
    }
}

/// Runs an experiment from the text of a TOML config file.
#[pyfunction]
fn run_config(py: Python<'_>, text: &str) -> PyResult<PyReport> {
    let config = ExperimentConfig::from_toml_str(text).map_err(py_err)?;
    let inner = py.detach(|| run_experiment(&config)).map_err(py_err)?;
    Ok(PyReport { inner })
}

/// Runs one figure reproduction with its default parameters.
#[pyfunction]
#[pyo3(signature = (name, seed=None, eps=None))]
fn run_figure(py: Python<'_>, name: &str, seed: Option<u64>, eps: Option<f64>) -> PyResult<PyReport> {
    let mut config = ExperimentConfig::for_experiment(experiment(name)?);
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(eps) = eps {
        config.epsilon = eps;
    }
    config.validate().map_err(py_err)?;
    let inner = py.detach(|| run_experiment(&config)).map_err(py_err)?;
    Ok(PyReport { inner })
}

/// Ground energy and amplitudes of a preset model.
#[pyfunction]
#[pyo3(signature = (model_name, half_extent=25, interior_radius=5, kinetic_scale=1.0))]
fn ground_state(
    py: Python<'_>,
    model_name: &str,
    half_extent: usize,
    interior_radius: usize,
    kinetic_scale: f64,
) -> PyResult<(f64, Vec<C64>)> {
    let spec = model(model_name, half_extent, interior_radius, kinetic_scale)?;
    let target = py.detach(|| Target::compute(&spec)).map_err(py_err)?;
    Ok((target.energy, target.state.into_amplitudes()))
}

/// Number of bound states localized in the interior.
#[pyfunction]
#[pyo3(signature = (model_name, half_extent=25, interior_radius=5, kinetic_scale=1.0))]
fn localized_count(
    py: Python<'_>,
    model_name: &str,
    half_extent: usize,
    interior_radius: usize,
    kinetic_scale: f64,
) -> PyResult<usize> {
    let spec = model(model_name, half_extent, interior_radius, kinetic_scale)?;
    py.detach(|| Ok(count_localized_states(&build_hamiltonian(&spec)?, &build_projector(&spec)?)?.count))
        .map_err(py_err)
}

/// `(passed, max_deviation, shift)` of the qubit construction against the lattice model.
#[pyfunction]
#[pyo3(signature = (model_name, half_extent))]
fn qubit_equivalence(model_name: &str, half_extent: usize) -> PyResult<(bool, f64, f64)> {
    let spec = model(model_name, half_extent, 1, 1.0)?;
    let r = check_equivalence(&spec).map_err(py_err)?;
    Ok((r.passed(), r.max_deviation(), r.shift))
}

/// Interior overlap after each step, starting with step 0.
#[pyfunction]
#[pyo3(signature = (
    model_name,
    schedule="projected_cooling",
    method="full",
    initial="point",
    dt=0.3,
    steps=40,
    epsilon=0.0,
    seed=0,
    half_extent=25,
    interior_radius=5,
))]
#[allow(clippy::too_many_arguments)]
fn evolve(
    py: Python<'_>,
    model_name: &str,
    schedule: &str,
    method: &str,
    initial: &str,
    dt: f64,
    steps: usize,
    epsilon: f64,
    seed: u64,
    half_extent: usize,
    interior_radius: usize,
) -> PyResult<Vec<f64>> {
    let spec = model(model_name, half_extent, interior_radius, 1.0)?;
    let kind = match schedule {
        "static" => ScheduleKind::Static,
        "adiabatic" => ScheduleKind::Adiabatic { final_time: steps as f64 * dt },
        "projected_cooling" => ScheduleKind::projected_cooling(),
        _ => return Err(PyValueError::new_err(format!("unknown schedule {schedule:?}"))),
    };
    let method = match method {
        "full" => Method::Full,
        "trotter" => Method::Trotter,
        _ => return Err(PyValueError::new_err(format!("unknown method {method:?}"))),
    };
    let initial = match initial {
        "point" => InitialKind::Point,
        "spread" => InitialKind::Spread,
        "random" => InitialKind::Random { seed },
        _ => return Err(PyValueError::new_err(format!("unknown initial state {initial:?}"))),
    };
    let noise = NoiseModel::new(epsilon, seed);
    let run = py.detach(|| run_evolve(&spec, kind, method, initial, dt, steps, noise)).map_err(py_err)?;
    Ok(run.records.iter().map(|r| r.overlap).collect())
}

/// Runs the acceptance suites; returns `(passed, report lines)`.
#[pyfunction]
#[pyo3(signature = (figures=false))]
fn check(py: Python<'_>, figures: bool) -> PyResult<(bool, Vec<String>)> {
    let report = py.detach(|| check_all(figures, |_, _| {})).map_err(py_err)?;
    Ok((report.passed(), report.to_string().lines().map(str::to_string).collect()))
}

#[pymodule]
fn projcool(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_figure, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(localized_count, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
