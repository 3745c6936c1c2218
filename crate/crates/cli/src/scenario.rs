//! Scenario files: one JSON document per run.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use forced_oscillator::transitions::MAX_ROW_M;
use forced_oscillator::{ForcingSpec, GridSpec, OscillatorParams, PhaseState};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub params: OscillatorParams,
    pub forcing: ForcingSpec,
    #[serde(default)]
    pub time: TimeSpec,
    #[serde(default)]
    pub quantum: QuantumSpec,
    /// Grid for the Schrödinger solver; [`GridSpec::default_for`] when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    /// Classical initial condition `(x, p)`.
    #[serde(default = "default_initial_state")]
    pub initial_state: PhaseState,
    /// Output directory; the `--out` flag takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_max: f64,
    pub samples: usize,
}

impl Default for TimeSpec {
    fn default() -> Self {
        TimeSpec { t_max: 2.0 * PI, samples: 101 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantumSpec {
    pub n_initial: usize,
    pub m_max: usize,
    pub tail_tol: f64,
}

impl Default for QuantumSpec {
    fn default() -> Self {
        QuantumSpec { n_initial: 0, m_max: 10, tail_tol: 1e-12 }
    }
}

fn default_initial_state() -> PhaseState {
    PhaseState::new(1.0, 0.0)
}

impl Default for Scenario {
    /// Unit oscillator under `K = 1` for half a period.
    fn default() -> Self {
        Scenario {
            params: OscillatorParams { m: 1.0, omega: 1.0 },
            forcing: ForcingSpec::Constant { k: 1.0 },
            time: TimeSpec { t_max: PI, samples: 101 },
            quantum: QuantumSpec::default(),
            grid: None,
            initial_state: default_initial_state(),
            output: None,
        }
    }
}

impl Scenario {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        OscillatorParams::new(self.params.m, self.params.omega)?;
        self.forcing.validate()?;
        if !(self.time.t_max > 0.0 && self.time.t_max.is_finite()) {
            return bad(format!("time.t_max must be finite and > 0, got {}", self.time.t_max));
        }
        if self.time.samples < 2 {
            return bad(format!("time.samples must be >= 2, got {}", self.time.samples));
        }
        if !(self.quantum.tail_tol > 0.0 && self.quantum.tail_tol < 1.0) {
            return bad(format!("quantum.tail_tol must lie in (0, 1), got {}", self.quantum.tail_tol));
        }
        if self.quantum.m_max > MAX_ROW_M || self.quantum.n_initial > MAX_ROW_M {
            return bad(format!("quantum levels must not exceed {MAX_ROW_M}"));
        }
        if !(self.initial_state.x.is_finite() && self.initial_state.p.is_finite()) {
            return bad("initial_state must be finite".into());
        }
        if let Some(g) = &self.grid {
            g.validate()?;
        }
        Ok(())
    }

    /// Explicit grid, or the default one for these parameters.
    pub fn grid(&self) -> CliResult<GridSpec> {
        match self.grid {
            Some(g) => Ok(g),
            None => Ok(GridSpec::default_for(&self.params)?),
        }
    }
}
