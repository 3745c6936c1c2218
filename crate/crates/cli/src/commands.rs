//! The export subcommands. Each writes CSV/JSON files into an output
//! directory and returns the paths it wrote.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use forced_oscillator::export::{self, EvolutionLogRow, TrajectoryRow, TransitionRecord};
use forced_oscillator::schrodinger::{self, SplitOperator};
use forced_oscillator::transitions::{self, probability_row, TransitionRow};
use forced_oscillator::{build_frame, CanonicalFrame, WaveFunction};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::scenario::Scenario;

/// Quadrature tolerance used when `--tol` is not given.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Serialize)]
pub struct SummaryRow {
    pub t: f64,
    pub lambda: f64,
    pub survival: f64,
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub truncation_m: usize,
}

#[derive(Debug, Serialize)]
pub struct SurvivalRow {
    pub t: f64,
    pub lambda: f64,
    pub survival: f64,
    pub ground_survival: f64,
}

pub(crate) fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))
}

pub(crate) fn write_rows<R: Serialize>(dir: &Path, name: &str, rows: &[R]) -> CliResult<PathBuf> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(CliError::io(&path))?;
    export::write_csv(BufWriter::new(file), rows).map_err(CliError::io(&path))?;
    Ok(path)
}

pub(crate) fn write_json<T: Serialize + ?Sized>(dir: &Path, name: &str, value: &T) -> CliResult<PathBuf> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(CliError::io(&path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(&path)(e.into()))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(CliError::io(&path))?;
    Ok(path)
}

pub fn times(s: &Scenario) -> Vec<f64> {
    export::time_grid(s.time.t_max, s.time.samples)
}

pub fn frame(s: &Scenario, tol: f64) -> CliResult<CanonicalFrame> {
    Ok(build_frame(s.params, s.forcing.clone(), s.time.t_max, s.time.samples, tol)?)
}

/// The rows of `classical.csv`.
pub fn classical_rows(s: &Scenario, tol: f64) -> CliResult<Vec<TrajectoryRow>> {
    Ok(export::trajectory(&s.params, s.initial_state, &s.forcing, &times(s), tol)?)
}

/// `classical.csv` (trajectory and moving-ellipse invariant) and `frame.csv`.
pub fn classical(s: &Scenario, tol: f64, out: &Path) -> CliResult<Vec<PathBuf>> {
    let rows = classical_rows(s, tol)?;
    let frame_rows = export::frame_rows(&frame(s, tol)?, &times(s))?;
    create_dir(out)?;
    Ok(vec![write_rows(out, "classical.csv", &rows)?, write_rows(out, "frame.csv", &frame_rows)?])
}

/// One probability row per sample time, starting from level `n_initial`.
pub fn transition_rows(s: &Scenario, tol: f64) -> CliResult<Vec<TransitionRow>> {
    let frame = frame(s, tol)?;
    times(s)
        .into_iter()
        .map(|t| Ok(probability_row(s.quantum.n_initial, &frame, t, s.quantum.tail_tol)?))
        .collect()
}

/// `transitions.csv` (long format, `m ≤ m_max`), `transitions_summary.csv`
/// and the full rows as `transition_rows.json`.
pub fn transitions(s: &Scenario, tol: f64, out: &Path) -> CliResult<Vec<PathBuf>> {
    let frame = frame(s, tol)?;
    let rows = transition_rows(s, tol)?;
    let n = s.quantum.n_initial;
    let mut long = Vec::new();
    let mut summary = Vec::new();
    for row in &rows {
        for m in 0..=s.quantum.m_max {
            long.push(TransitionRecord {
                t: row.t,
                n,
                m,
                p: row.probabilities.get(m).copied().unwrap_or(0.0),
            });
        }
        summary.push(SummaryRow {
            t: row.t,
            lambda: row.lambda,
            survival: survival_probability(n, &frame, row.t)?,
            partial_sum: row.partial_sum(),
            tail_bound: row.tail_bound,
            truncation_m: row.truncation_m,
        });
    }
    create_dir(out)?;
    Ok(vec![
        write_rows(out, "transitions.csv", &long)?,
        write_rows(out, "transitions_summary.csv", &summary)?,
        write_json(out, "transition_rows.json", &rows)?,
    ])
}

/// `P_{n,n}(t)`; the ground level goes through [`transitions::ground_state_survival`].
pub fn survival_probability(n: usize, frame: &CanonicalFrame, t: f64) -> CliResult<f64> {
    Ok(match n {
        0 => transitions::ground_state_survival(frame, t)?,
        _ => transitions::transition_probability(n, n, frame, t)?,
    })
}

pub fn survival_rows(s: &Scenario, tol: f64) -> CliResult<Vec<SurvivalRow>> {
    let frame = frame(s, tol)?;
    let n = s.quantum.n_initial;
    times(s)
        .into_iter()
        .map(|t| {
            let d = transitions::DisplacementParams::from_frame(&frame, t)?;
            Ok(SurvivalRow {
                t,
                lambda: d.lambda(),
                survival: survival_probability(n, &frame, t)?,
                ground_survival: transitions::ground_state_survival(&frame, t)?,
            })
        })
        .collect()
}

/// `survival.csv`: `P_{n,n}(t)` for `n = n_initial`, and the ground-state survival.
pub fn survival(s: &Scenario, tol: f64, out: &Path) -> CliResult<Vec<PathBuf>> {
    let rows = survival_rows(s, tol)?;
    create_dir(out)?;
    Ok(vec![write_rows(out, "survival.csv", &rows)?])
}

/// Grid evolution of `Ψ_{n_initial}` under the forced Hamiltonian.
pub fn pde_evolution(s: &Scenario) -> CliResult<(WaveFunction, Vec<EvolutionLogRow>)> {
    let grid = s.grid()?;
    let op = SplitOperator::laboratory(s.params, s.forcing.clone(), &grid)?;
    let ground = WaveFunction::eigenstate(&s.params, 0, grid)?;
    let mut psi = WaveFunction::eigenstate(&s.params, s.quantum.n_initial, grid)?;
    let mut log = Vec::new();
    let mut prev = 0.0;
    for t in times(s) {
        op.advance(&mut psi, prev, t)?;
        prev = t;
        log.push(EvolutionLogRow {
            t,
            norm: psi.norm(),
            energy: schrodinger::energy(&psi, &s.params, s.forcing.evaluate(t)?),
            overlap_ground: schrodinger::overlap(&ground, &psi)?.norm_sqr(),
        });
    }
    Ok((psi, log))
}

/// `evolution.csv` (norm, energy and ground-state population per sample time)
/// and `state_final.csv`.
pub fn evolve_pde(s: &Scenario, out: &Path) -> CliResult<Vec<PathBuf>> {
    let (psi, log) = pde_evolution(s)?;
    create_dir(out)?;
    Ok(vec![
        write_rows(out, "evolution.csv", &log)?,
        write_rows(out, "state_final.csv", &export::state_rows(&psi))?,
    ])
}
