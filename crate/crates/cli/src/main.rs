use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fho_cli::{commands, CliError, Command, Scenario, Suite};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "fho", version, about = "Forced harmonic oscillator: classical, canonical and quantum runs")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Trajectory, non-homogeneous response and moving-frame samples.
    Classical(Common),
    /// Transition probabilities P_{n,m}(t) over the time grid.
    Transitions(Common),
    /// Survival probability P_{n,n}(t) and ground-state survival.
    Survival(Common),
    /// Grid Schrödinger evolution of the initial eigenstate.
    EvolvePde(Common),
    /// Runs the verification suite and writes verify_report.json.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file; repeat for a batch. `verify` uses a built-in
    /// scenario when none is given.
    #[arg(long = "scenario", value_name = "FILE")]
    scenarios: Vec<PathBuf>,
    /// Output directory (default: the scenario's `output`, else `fho-out`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Scenarios run concurrently.
    #[arg(long, value_name = "N", default_value_t = 1)]
    jobs: usize,
    /// Quadrature tolerance for the Duhamel and gauge integrals.
    #[arg(long, value_name = "X", default_value_t = commands::DEFAULT_TOL)]
    tol: f64,
}

fn output_dir(common: &Common, scenario: &Scenario, stem: Option<&str>) -> PathBuf {
    let base = common
        .out
        .clone()
        .or_else(|| scenario.output.clone())
        .unwrap_or_else(|| PathBuf::from("fho-out"));
    match stem {
        Some(stem) => base.join(stem),
        None => base,
    }
}

fn run_one(command: Command, common: &Common, path: Option<&Path>, batch: bool) -> Result<Vec<PathBuf>, CliError> {
    let scenario = match path {
        Some(p) => Scenario::load(p)?,
        None => Scenario::default(),
    };
    let stem = batch.then(|| path.and_then(|p| p.file_stem()).map(|s| s.to_string_lossy().into_owned())).flatten();
    fho_cli::run(command, &scenario, common.tol, &output_dir(common, &scenario, stem.as_deref()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match &cli.command {
        Sub::Classical(c) => (Command::Classical, c),
        Sub::Transitions(c) => (Command::Transitions, c),
        Sub::Survival(c) => (Command::Survival, c),
        Sub::EvolvePde(c) => (Command::EvolvePde, c),
        Sub::Verify { common, suite } => (Command::Verify(*suite), common),
    };
    if !(common.tol > 0.0 && common.tol.is_finite()) {
        eprintln!("error: invalid configuration: --tol must be finite and > 0");
        return ExitCode::from(2);
    }
    let paths: Vec<Option<&Path>> = if common.scenarios.is_empty() {
        if !matches!(command, Command::Verify(_)) {
            eprintln!("error: invalid configuration: --scenario is required");
            return ExitCode::from(2);
        }
        vec![None]
    } else {
        common.scenarios.iter().map(|p| Some(p.as_path())).collect()
    };
    let batch = paths.len() > 1;
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(common.jobs.max(1)).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let results: Vec<_> = pool.install(|| paths.par_iter().map(|p| run_one(command, common, *p, batch)).collect());

    let mut code = 0u8;
    for (path, result) in paths.iter().zip(results) {
        let label = path.map_or_else(|| "built-in scenario".into(), |p| p.display().to_string());
        match result {
            Ok(files) => {
                for f in files {
                    println!("{}", f.display());
                }
            }
            Err(e) => {
                eprintln!("error: {label}: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    ExitCode::from(code)
}
