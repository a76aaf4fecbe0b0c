use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use projcool_core::harness::{
    check_all, run_experiment, run_grid, Experiment, ExperimentConfig, ExperimentReport, GridConfig,
};
use projcool_core::Error;

const OUT_ENV: &str = "PROJCOOL_OUT";
const DEFAULT_OUT: &str = "projcool-out";

#[derive(Parser)]
#[command(name = "projcool", version, about = "Projected cooling simulator and figure harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        /// Output directory; overrides the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Model 1A fixed-point runs from random initial states.
    Fig1(FigureArgs),
    /// Model 1B curve family.
    Fig2a(FigureArgs),
    /// Model 2 curve family.
    Fig2b(FigureArgs),
    /// Model 2 interior wavefunction grids.
    Fig3(FigureArgs),
    /// Run every acceptance suite and report pass/fail.
    Check {
        /// Skip the figure reproductions.
        #[arg(long)]
        quick: bool,
    },
    /// Scan a parameter grid around a base config.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FigureArgs {
    /// Output directory [default: $PROJCOOL_OUT/<figure> or ./projcool-out/<figure>].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Root seed for every random draw in the run.
    #[arg(long)]
    seed: Option<u64>,
    /// Noise strength.
    #[arg(long)]
    eps: Option<f64>,
}

enum Failure {
    Acceptance,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn default_out(label: &str) -> PathBuf {
    let base =
        std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map_or_else(|| PathBuf::from(DEFAULT_OUT), PathBuf::from);
    base.join(label)
}

fn finish(report: &ExperimentReport, dir: &Path) -> Result<(), Failure> {
    let written = report.write(dir)?;
    for c in &report.checks {
        println!("{c}");
    }
    println!("wrote {} files to {}", written.len(), dir.display());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Acceptance)
    }
}

fn figure(experiment: Experiment, args: FigureArgs) -> Result<(), Failure> {
    let mut config = ExperimentConfig::for_experiment(experiment);
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(eps) = args.eps {
        config.epsilon = eps;
    }
    config.validate()?;
    let dir = args.out.unwrap_or_else(|| default_out(experiment.label()));
    finish(&run_experiment(&config)?, &dir)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { config, out } => {
            let config = ExperimentConfig::load(&config)?;
            let dir =
                out.or_else(|| config.output_dir.clone()).unwrap_or_else(|| default_out(config.experiment.label()));
            finish(&run_experiment(&config)?, &dir)
        }
        Command::Fig1(a) => figure(Experiment::Fig1, a),
        Command::Fig2a(a) => figure(Experiment::Fig2a, a),
        Command::Fig2b(a) => figure(Experiment::Fig2b, a),
        Command::Fig3(a) => figure(Experiment::Fig3, a),
        Command::Check { quick } => {
            let report = check_all(!quick, |section, checks| {
                println!("== {section}");
                for c in checks {
                    println!("{c}");
                }
            })?;
            let failed = report.failures().count();
            if failed == 0 {
                println!("all checks passed");
                Ok(())
            } else {
                println!("{failed} checks failed");
                Err(Failure::Acceptance)
            }
        }
        Command::Sweep { config, out } => {
            let grid = GridConfig::load(&config)?;
            let dir = out.or_else(|| grid.base.output_dir.clone()).unwrap_or_else(|| default_out("sweep"));
            let report = run_grid(&grid)?;
            let written = report.write(&dir)?;
            println!("{} points, wrote {} files to {}", report.points.len(), written.len(), dir.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Acceptance) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_configuration() { 2 } else { 1 })
        }
    }
}
