//! Classical forced oscillator: exact propagator, Duhamel response and the
//! conserved quadratic form about the moving center.

use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::quadrature;

/// Default tolerance of the Duhamel quadrature.
pub const DEFAULT_DUHAMEL_TOL: f64 = 1e-10;

// Below this |ωt| the sin(ωt)/(mω) entry is evaluated by its Taylor series.
const SMALL_PHASE: f64 = 1e-6;

/// Mass and angular frequency shared by the forced and the free Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct OscillatorParams {
    pub m: f64,
    pub omega: f64,
}

#[derive(Deserialize)]
struct RawParams {
    m: f64,
    omega: f64,
}

impl TryFrom<RawParams> for OscillatorParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        OscillatorParams::new(raw.m, raw.omega)
    }
}

impl OscillatorParams {
    /// `m > 0`, `ω ≥ 0`; `ω = 0` is the free particle under a uniform force.
    pub fn new(m: f64, omega: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::domain(format!("mass must be positive and finite, got {m}")));
        }
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Error::domain(format!(
                "angular frequency must be non-negative and finite, got {omega}"
            )));
        }
        Ok(OscillatorParams { m, omega })
    }

    /// Generator of the homogeneous flow, `dz/dt = ℍ₀ z`.
    pub fn generator(&self) -> Matrix2 {
        Matrix2([[0.0, 1.0 / self.m], [-self.m * self.omega * self.omega, 0.0]])
    }

    /// Matrix of the quadratic form `H₀(x, p) = mω²x²/2 + p²/2m`.
    pub fn quadratic_form(&self) -> Matrix2 {
        Matrix2([
            [0.5 * self.m * self.omega * self.omega, 0.0],
            [0.0, 0.5 / self.m],
        ])
    }
}

/// A point `(x, p)` of phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseState {
    pub x: f64,
    pub p: f64,
}

impl PhaseState {
    pub const ORIGIN: PhaseState = PhaseState { x: 0.0, p: 0.0 };

    pub fn new(x: f64, p: f64) -> Self {
        PhaseState { x, p }
    }

    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.p.abs())
    }
}

impl Add for PhaseState {
    type Output = PhaseState;
    fn add(self, rhs: PhaseState) -> PhaseState {
        PhaseState::new(self.x + rhs.x, self.p + rhs.p)
    }
}

impl Sub for PhaseState {
    type Output = PhaseState;
    fn sub(self, rhs: PhaseState) -> PhaseState {
        PhaseState::new(self.x - rhs.x, self.p - rhs.p)
    }
}

/// Real 2×2 matrix acting on `(x, p)` column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[f64; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn apply(&self, z: PhaseState) -> PhaseState {
        let a = &self.0;
        PhaseState::new(a[0][0] * z.x + a[0][1] * z.p, a[1][0] * z.x + a[1][1] * z.p)
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }

    pub fn transpose(&self) -> Matrix2 {
        let a = &self.0;
        Matrix2([[a[0][0], a[1][0]], [a[0][1], a[1][1]]])
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    /// Largest absolute entry of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Matrix2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - rhs.0[i][j]).abs());
            }
        }
        d
    }
}

/// Symplectic propagator `U(t)` of the homogeneous oscillator.
pub type PropagatorMatrix = Matrix2;

// (cos ωτ, sin(ωτ)/(mω), mω sin ωτ)
fn trig_entries(params: &OscillatorParams, tau: f64) -> (f64, f64, f64) {
    let (m, w) = (params.m, params.omega);
    let phase = w * tau;
    let (s, c) = phase.sin_cos();
    let sin_over = if phase.abs() < SMALL_PHASE {
        tau / m * (1.0 - phase * phase / 6.0)
    } else {
        s / (m * w)
    };
    (c, sin_over, m * w * s)
}

/// `U(t) = [[cos ωt, sin(ωt)/(mω)], [−mω sin ωt, cos ωt]]`, with the
/// `[[1, t/m], [0, 1]]` limit at `ω = 0`.
pub fn propagator(params: &OscillatorParams, t: f64) -> Result<PropagatorMatrix> {
    if !t.is_finite() {
        return Err(Error::domain(format!("propagator at non-finite time {t}")));
    }
    let (c, s_over, ms) = trig_entries(params, t);
    Ok(Matrix2([[c, s_over], [-ms, c]]))
}

/// `∫_{t0}^{t1} U(t1 − s) (0, k(s))ᵀ ds`.
pub fn duhamel_segment(
    params: &OscillatorParams,
    spec: &ForcingSpec,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<PhaseState> {
    if t1 == t0 || matches!(spec, ForcingSpec::Zero) {
        return Ok(PhaseState::ORIGIN);
    }
    let mut knots = vec![t0];
    knots.extend(spec.breakpoints(t0, t1));
    knots.push(t1);
    let v = quadrature::gauss_kronrod(
        |s| {
            let k = spec.value(s);
            let (c, s_over, _) = trig_entries(params, t1 - s);
            [k * s_over, k * c]
        },
        &knots,
        tol,
    )?;
    Ok(PhaseState::new(v[0], v[1]))
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("evolution time must be finite and >= 0, got {t}")))
    }
}

/// Full solution `z(t) = U(t) z0 + ∫₀ᵗ U(t−s)(0, k(s))ᵀ ds`.
pub fn evolve(
    params: &OscillatorParams,
    z0: PhaseState,
    spec: &ForcingSpec,
    t: f64,
    tol: f64,
) -> Result<PhaseState> {
    check_time(t)?;
    let homogeneous = propagator(params, t)?.apply(z0);
    Ok(homogeneous + duhamel_segment(params, spec, 0.0, t, tol)?)
}

/// `z_nh(t)`: the response started from rest at the origin.
pub fn nonhomogeneous(
    params: &OscillatorParams,
    spec: &ForcingSpec,
    t: f64,
    tol: f64,
) -> Result<PhaseState> {
    evolve(params, PhaseState::ORIGIN, spec, t, tol)
}

/// `H₀(z) = mω²x²/2 + p²/2m`.
pub fn quadratic_invariant(params: &OscillatorParams, z: PhaseState) -> f64 {
    0.5 * params.m * params.omega * params.omega * z.x * z.x + 0.5 * z.p * z.p / params.m
}

/// Closed-form `z_nh(t)` for a constant force `K`:
/// `(K(1 − cos ωt)/(mω²), K sin(ωt)/ω)`.
pub fn laboratory_ellipse(params: &OscillatorParams, k: f64, t: f64) -> Result<PhaseState> {
    if params.omega == 0.0 {
        return Err(Error::domain("the laboratory ellipse degenerates at omega = 0"));
    }
    if !t.is_finite() {
        return Err(Error::domain(format!("non-finite time {t}")));
    }
    let w = params.omega;
    let (s, c) = (w * t).sin_cos();
    Ok(PhaseState::new(k * (1.0 - c) / (params.m * w * w), k * s / w))
}
