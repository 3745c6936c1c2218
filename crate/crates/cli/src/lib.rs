//! Scenario-driven front end for the `forced_oscillator` library: batch
//! runs, CSV/JSON export and the verification suite behind the `fho` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod scenario;
pub mod verify;

use std::path::{Path, PathBuf};

pub use error::{CliError, CliResult};
pub use scenario::Scenario;
pub use verify::{Report, Suite};

/// What to run for one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classical,
    Transitions,
    Survival,
    EvolvePde,
    Verify(Suite),
}

/// Runs `command` on `scenario`, writing into `out`. A verification run
/// writes its report before reporting failure.
pub fn run(command: Command, scenario: &Scenario, tol: f64, out: &Path) -> CliResult<Vec<PathBuf>> {
    match command {
        Command::Classical => commands::classical(scenario, tol, out),
        Command::Transitions => commands::transitions(scenario, tol, out),
        Command::Survival => commands::survival(scenario, tol, out),
        Command::EvolvePde => commands::evolve_pde(scenario, out),
        Command::Verify(suite) => {
            let report = verify::run(scenario, suite, tol);
            commands::create_dir(out)?;
            let path = commands::write_json(out, "verify_report.json", &report)?;
            match report.failed() {
                0 => Ok(vec![path]),
                failed => Err(CliError::VerificationFailed { failed, total: report.checks.len() }),
            }
        }
    }
}
