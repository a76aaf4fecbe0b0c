//! Experiment configs, figure reproductions, acceptance checks and output files.

mod check;
mod config;
mod figures;
mod grid;
mod report;
mod table;

pub use check::{
    check_all, determinism_checks, figure_checks, fitter_checks, oracle_checks, qubit_checks, runtime_budget,
    stepper_checks, CheckReport, COMMUTING_TOL, FIT_ALPHA_TOL, GROUND_ENERGY_TOL, TROTTER_CONVERGENCE_RATIO,
    UNITARITY_TOL,
};
pub use config::{
    Experiment, ExperimentConfig, ModelConfig, DEFAULT_DT, DEFAULT_EPSILON, DEFAULT_HALF_EXTENT,
    DEFAULT_INTERIOR_RADIUS, DEFAULT_NOISE_SEEDS, DEFAULT_STEPS,
};
pub use figures::{
    fig2_thresholds, run_custom, run_experiment, EDGE_AMPLITUDE_LIMIT, EDGE_SITES, FIG1_RUNS, FIXED_POINT_THRESHOLD,
    SMOOTHING_WINDOW,
};
pub use grid::{run_grid, GridAxes, GridConfig, GridPoint, GridReport, GRID_COLUMNS};
pub use report::{CheckOutcome, ExperimentReport, RunArtifact, RunSummary};
pub use table::{write_atomic, Cell, Table, MANIFEST_FORMAT, TABLE_FORMAT, TRAJECTORY_COLUMNS};
