//! Wavefunctions on a uniform periodic grid, split-operator evolution under
//! the forced and the free Hamiltonian, and the unitary frame maps.
//!
//! Kinetic factors and fractional shifts act on the discrete Fourier
//! coefficients, so both are exact for band-limited states.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::canonical::{theta_at, theta_prime_at, CanonicalFrame};
use crate::classical::OscillatorParams;
use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::hermite;

/// Fraction of the grid on each side treated as the boundary layer.
pub const BOUNDARY_FRACTION: f64 = 0.05;
/// Largest norm fraction tolerated inside the boundary layer.
pub const BOUNDARY_MASS_TOL: f64 = 1e-10;

const BOUNDARY_CHECK_EVERY: usize = 256;

/// Uniform periodic grid `x_j = x_min + j dx`, `dx = (x_max − x_min)/points`,
/// plus the time step of the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub dt: f64,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, points: usize, dt: f64) -> Result<Self> {
        let g = GridSpec {
            x_min,
            x_max,
            points,
            dt,
        };
        g.validate().map(|_| g)
    }

    /// `[−12, 12]/√(mω)`, 1024 points, `dt = 1e−3`.
    pub fn default_for(params: &OscillatorParams) -> Result<Self> {
        let mw = params.m * params.omega;
        if mw <= 0.0 {
            return Err(Error::domain("default grid needs omega > 0"));
        }
        let half = 12.0 / mw.sqrt();
        GridSpec::new(-half, half, 1024, 1e-3)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(Error::domain(format!(
                "grid needs finite x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.points < 64 || !self.points.is_power_of_two() {
            return Err(Error::domain(format!(
                "grid points must be a power of two >= 64, got {}",
                self.points
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::domain(format!("time step must be positive, got {}", self.dt)));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |j| self.x(j))
    }

    /// Wave number of FFT bin `q` (bins at and above `N/2` are negative).
    fn wavenumber(&self, q: usize) -> f64 {
        let n = self.points as i64;
        let q = q as i64;
        let signed = if q < n / 2 { q } else { q - n };
        2.0 * std::f64::consts::PI * signed as f64 / (self.x_max - self.x_min)
    }

    fn same_space(&self, other: &GridSpec) -> bool {
        self.x_min == other.x_min && self.x_max == other.x_max && self.points == other.points
    }
}

/// Complex samples `ψ(x_j)` on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.points {
            return Err(Error::domain(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.points
            )));
        }
        Ok(WaveFunction { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: GridSpec, f: F) -> Result<Self> {
        let values = grid.positions().map(f).collect();
        WaveFunction::new(grid, values)
    }

    /// `Ψₙ` sampled on the grid.
    pub fn eigenstate(params: &OscillatorParams, n: usize, grid: GridSpec) -> Result<Self> {
        let values = grid
            .positions()
            .map(|x| hermite::eigenstate(params, n, x).map(|v| Complex64::new(v, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        WaveFunction::new(grid, values)
    }

    /// Ground state displaced to `x0` and boosted to momentum `p0`.
    pub fn coherent(params: &OscillatorParams, x0: f64, p0: f64, grid: GridSpec) -> Result<Self> {
        let values = grid
            .positions()
            .map(|x| {
                hermite::eigenstate(params, 0, x - x0).map(|v| v * Complex64::from_polar(1.0, p0 * x))
            })
            .collect::<Result<Vec<_>>>()?;
        WaveFunction::new(grid, values)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.values.iter_mut().for_each(|v| *v /= n);
        }
        self
    }

    /// Norm fraction carried by the outer 5% of the grid on either side.
    pub fn boundary_mass(&self) -> f64 {
        let n = self.grid.points;
        let edge = ((n as f64) * BOUNDARY_FRACTION).ceil() as usize;
        let outer: f64 = self.values[..edge]
            .iter()
            .chain(&self.values[n - edge..])
            .map(|v| v.norm_sqr())
            .sum();
        let total: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            0.0
        } else {
            outer / total
        }
    }

    pub fn check_boundary(&self) -> Result<()> {
        let mass = self.boundary_mass();
        if mass > BOUNDARY_MASS_TOL || !mass.is_finite() {
            Err(Error::Boundary { mass })
        } else {
            Ok(())
        }
    }

    /// `⟨x⟩`.
    pub fn mean_position(&self) -> f64 {
        let dx = self.grid.dx();
        self.grid.positions().zip(&self.values).map(|(x, v)| x * v.norm_sqr()).sum::<f64>() * dx / self.norm_sqr()
    }

    /// `⟨p⟩` with `p = −i d/dx`.
    pub fn mean_momentum(&self) -> f64 {
        let d = Spectral::new(&self.grid).derivative(&self.values);
        let s: Complex64 = self.values.iter().zip(&d).map(|(v, dv)| v.conj() * Complex64::new(0.0, -1.0) * dv).sum();
        s.re * self.grid.dx() / self.norm_sqr()
    }
}

/// Forward/inverse FFT pair plus the wave numbers of one grid.
pub struct Spectral {
    grid: GridSpec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
}

impl Spectral {
    pub fn new(grid: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        Spectral {
            grid: *grid,
            forward: planner.plan_fft_forward(grid.points),
            inverse: planner.plan_fft_inverse(grid.points),
            wavenumbers: (0..grid.points).map(|q| grid.wavenumber(q)).collect(),
        }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let scale = 1.0 / buf.len() as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
    }

    fn multiply_in_fourier<F: Fn(f64) -> Complex64>(&self, values: &[Complex64], factor: F) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward(&mut buf);
        for (c, &p) in buf.iter_mut().zip(&self.wavenumbers) {
            *c *= factor(p);
        }
        self.inverse(&mut buf);
        buf
    }

    /// `ψ(x − shift)`.
    pub fn shift(&self, values: &[Complex64], shift: f64) -> Vec<Complex64> {
        if shift == 0.0 {
            return values.to_vec();
        }
        self.multiply_in_fourier(values, |p| Complex64::from_polar(1.0, -p * shift))
    }

    /// `dψ/dx`.
    pub fn derivative(&self, values: &[Complex64]) -> Vec<Complex64> {
        self.multiply_in_fourier(values, |p| Complex64::new(0.0, p))
    }

    /// `−(1/2m) d²ψ/dx²`.
    pub fn kinetic(&self, values: &[Complex64], m: f64) -> Vec<Complex64> {
        self.multiply_in_fourier(values, |p| Complex64::new(p * p / (2.0 * m), 0.0))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
}

/// `Ψ(p) = (2π)^{−1/2} ∫ e^{−ipx} Ψ(x) dx` on the reciprocal grid
/// `p_k = (k − N/2) dp`, `dp = 2π/(x_max − x_min)`.
///
/// The returned grid stores `p_min` and `p_min + N dp` in `x_min`/`x_max`.
pub fn momentum_representation(psi: &WaveFunction) -> WaveFunction {
    let grid = psi.grid;
    let n = grid.points;
    let dx = grid.dx();
    let dp = 2.0 * std::f64::consts::PI / (grid.x_max - grid.x_min);
    let p_min = -((n / 2) as f64) * dp;
    let mut buf = psi.values.clone();
    Spectral::new(&grid).forward(&mut buf);
    let pref = dx / (2.0 * std::f64::consts::PI).sqrt();
    let values = (0..n)
        .map(|k| {
            let q = (k + n / 2) % n;
            let p = p_min + k as f64 * dp;
            pref * Complex64::from_polar(1.0, -p * grid.x_min) * buf[q]
        })
        .collect();
    WaveFunction {
        grid: GridSpec {
            x_min: p_min,
            x_max: p_min + n as f64 * dp,
            points: n,
            dt: grid.dt,
        },
        values,
    }
}

/// `Σ conj(ψ1) ψ2 dx`.
pub fn overlap(psi1: &WaveFunction, psi2: &WaveFunction) -> Result<Complex64> {
    if !psi1.grid.same_space(&psi2.grid) {
        return Err(Error::GridMismatch);
    }
    let s: Complex64 = psi1.values.iter().zip(&psi2.values).map(|(a, b)| a.conj() * b).sum();
    Ok(s * psi1.grid.dx())
}

/// `min_φ ‖a − e^{iφ} b‖`, the distance with the global phase quotiented out.
pub fn phase_aligned_distance(a: &WaveFunction, b: &WaveFunction) -> Result<f64> {
    let ov = overlap(b, a)?;
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { Complex64::new(1.0, 0.0) };
    let d: f64 = a.values.iter().zip(&b.values).map(|(x, y)| (x - phase * y).norm_sqr()).sum();
    Ok((d * a.grid.dx()).sqrt())
}

/// `|⟨a, b⟩|² / (‖a‖² ‖b‖²)`.
pub fn fidelity(a: &WaveFunction, b: &WaveFunction) -> Result<f64> {
    Ok(overlap(a, b)?.norm_sqr() / (a.norm_sqr() * b.norm_sqr()))
}

/// `⟨ψ, (−(1/2m)∂² + mω²x²/2 − x k) ψ⟩ / ⟨ψ, ψ⟩`.
pub fn energy(psi: &WaveFunction, params: &OscillatorParams, force: f64) -> f64 {
    let kin = Spectral::new(&psi.grid).kinetic(&psi.values, params.m);
    let w2 = params.m * params.omega * params.omega;
    let s: f64 = psi
        .grid
        .positions()
        .zip(psi.values.iter().zip(&kin))
        .map(|(x, (v, kv))| (v.conj() * kv).re + (0.5 * w2 * x * x - x * force) * v.norm_sqr())
        .sum();
    s * psi.grid.dx() / psi.norm_sqr()
}

/// Strang-split propagator for `−(1/2m)∂² + mω²x²/2 − x k(t)`:
/// half kinetic step, full potential step with `k` at the midpoint,
/// half kinetic step.
pub struct SplitOperator {
    params: OscillatorParams,
    forcing: ForcingSpec,
    spectral: Spectral,
}

impl SplitOperator {
    /// Forced (laboratory) Hamiltonian.
    pub fn laboratory(params: OscillatorParams, forcing: ForcingSpec, grid: &GridSpec) -> Result<Self> {
        grid.validate()?;
        Ok(SplitOperator {
            params,
            forcing,
            spectral: Spectral::new(grid),
        })
    }

    /// Free (moving-frame) Hamiltonian.
    pub fn moving(params: OscillatorParams, grid: &GridSpec) -> Result<Self> {
        Self::laboratory(params, ForcingSpec::Zero, grid)
    }

    pub fn grid(&self) -> &GridSpec {
        self.spectral.grid()
    }

    /// Evolves `psi` from `t0` to `t1` with steps no longer than `grid.dt`,
    /// restarting the step sequence at each forcing breakpoint.
    pub fn advance(&self, psi: &mut WaveFunction, t0: f64, t1: f64) -> Result<()> {
        let grid = *self.grid();
        if !grid.same_space(&psi.grid) {
            return Err(Error::GridMismatch);
        }
        if !(t1 >= t0) || !t1.is_finite() {
            return Err(Error::domain(format!("cannot evolve from {t0} to {t1}")));
        }
        psi.check_boundary()?;
        // steps never straddle a jump or kink of k
        let mut knots = vec![t0];
        knots.extend(self.forcing.breakpoints(t0, t1).into_iter().filter(|&b| b > t0 && b < t1));
        knots.push(t1);
        for w in knots.windows(2) {
            if w[1] > w[0] {
                self.advance_smooth(psi, w[0], w[1])?;
            }
        }
        Ok(())
    }

    /// Strang steps on an interval where `k` is smooth.
    fn advance_smooth(&self, psi: &mut WaveFunction, t0: f64, t1: f64) -> Result<()> {
        let grid = *self.grid();
        let steps = (((t1 - t0) / grid.dt) - 1e-9).ceil().max(1.0) as usize;
        let dt = (t1 - t0) / steps as f64;
        let m = self.params.m;
        let half: Vec<Complex64> = self
            .spectral
            .wavenumbers
            .iter()
            .map(|p| Complex64::from_polar(1.0, -p * p / (2.0 * m) * 0.5 * dt))
            .collect();
        let full: Vec<Complex64> = half.iter().map(|h| h * h).collect();
        let w2 = m * self.params.omega * self.params.omega;
        let harmonic: Vec<Complex64> = grid
            .positions()
            .map(|x| Complex64::from_polar(1.0, -0.5 * w2 * x * x * dt))
            .collect();
        let forced = !matches!(self.forcing, ForcingSpec::Zero);
        let xs: Vec<f64> = grid.positions().collect();

        let buf = &mut psi.values;
        self.spectral.forward(buf);
        buf.iter_mut().zip(&half).for_each(|(c, h)| *c *= h);
        for s in 0..steps {
            self.spectral.inverse(buf);
            let k = if forced { self.forcing.value(t0 + (s as f64 + 0.5) * dt) } else { 0.0 };
            if k != 0.0 {
                for ((v, &x), h) in buf.iter_mut().zip(&xs).zip(&harmonic) {
                    *v *= h * Complex64::from_polar(1.0, x * k * dt);
                }
            } else {
                buf.iter_mut().zip(&harmonic).for_each(|(v, h)| *v *= h);
            }
            if (s + 1) % BOUNDARY_CHECK_EVERY == 0 {
                let probe = WaveFunction { grid, values: buf.clone() };
                probe.check_boundary()?;
            }
            self.spectral.forward(buf);
            let kin = if s + 1 == steps { &half } else { &full };
            buf.iter_mut().zip(kin).for_each(|(c, f)| *c *= f);
        }
        self.spectral.inverse(buf);
        psi.check_boundary()
    }
}

fn evolve_with(op: &SplitOperator, psi0: &WaveFunction, t_final: f64) -> Result<WaveFunction> {
    if !(t_final >= 0.0) {
        return Err(Error::domain(format!("evolution time must be >= 0, got {t_final}")));
    }
    let mut psi = psi0.clone();
    psi.grid.dt = op.grid().dt;
    op.advance(&mut psi, 0.0, t_final)?;
    Ok(psi)
}

/// Solves `i∂ψ/∂t = [−(1/2m)∂² + mω²x²/2 − x k(t)] ψ` from `0` to `t_final`.
pub fn evolve_lab(
    params: &OscillatorParams,
    spec: &ForcingSpec,
    psi0: &WaveFunction,
    t_final: f64,
    grid: &GridSpec,
) -> Result<WaveFunction> {
    let op = SplitOperator::laboratory(*params, spec.clone(), grid)?;
    evolve_with(&op, psi0, t_final)
}

/// Solves `i∂φ/∂t = [−(1/2m)∂² + mω²ξ²/2] φ` from `0` to `t_final`.
pub fn evolve_moving(
    params: &OscillatorParams,
    phi0: &WaveFunction,
    t_final: f64,
    grid: &GridSpec,
) -> Result<WaveFunction> {
    let op = SplitOperator::moving(*params, grid)?;
    evolve_with(&op, phi0, t_final)
}

/// `(U_{F1} φ)(x) = e^{iθ(x, t)} φ(x − x_nh(t))`: moving frame to laboratory.
pub fn apply_uf1(frame: &CanonicalFrame, phi: &WaveFunction, t: f64) -> Result<WaveFunction> {
    let s = frame.state(t)?;
    let m = frame.params().m;
    let shifted = Spectral::new(&phi.grid).shift(&phi.values, s.x_nh);
    let values = phi
        .grid
        .positions()
        .zip(shifted)
        .map(|(x, v)| v * Complex64::from_polar(1.0, theta_at(&s, m, x)))
        .collect();
    let out = WaveFunction { grid: phi.grid, values };
    out.check_boundary()?;
    Ok(out)
}

/// `(U_{F2} ψ)(ξ) = e^{iθ′(ξ, t)} ψ(ξ + x_nh(t))`: laboratory to moving frame.
pub fn apply_uf2(frame: &CanonicalFrame, psi: &WaveFunction, t: f64) -> Result<WaveFunction> {
    let s = frame.state(t)?;
    let m = frame.params().m;
    let shifted = Spectral::new(&psi.grid).shift(&psi.values, -s.x_nh);
    let values = psi
        .grid
        .positions()
        .zip(shifted)
        .map(|(xi, v)| v * Complex64::from_polar(1.0, theta_prime_at(&s, m, xi)))
        .collect();
    let out = WaveFunction { grid: psi.grid, values };
    out.check_boundary()?;
    Ok(out)
}

fn grid_distance(a: &[Complex64], b: &[Complex64], dx: f64) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>() * dx).sqrt()
}

/// `‖U_{F1}(ξ̂φ) − (x̂ − x_nh) U_{F1}φ‖` in grid norm.
pub fn position_covariance_residual(frame: &CanonicalFrame, phi: &WaveFunction, t: f64) -> Result<f64> {
    let x_nh = frame.state(t)?.x_nh;
    let xi_phi = WaveFunction {
        grid: phi.grid,
        values: phi.grid.positions().zip(&phi.values).map(|(x, v)| x * v).collect(),
    };
    let lhs = apply_uf1(frame, &xi_phi, t)?;
    let mapped = apply_uf1(frame, phi, t)?;
    let rhs: Vec<Complex64> = phi.grid.positions().zip(&mapped.values).map(|(x, v)| (x - x_nh) * v).collect();
    Ok(grid_distance(&lhs.values, &rhs, phi.grid.dx()))
}

/// `‖U_{F1}(η̂φ) − (−i∂ₓ − m ẋ_nh) U_{F1}φ‖` in grid norm, with spectral derivatives.
pub fn momentum_covariance_residual(frame: &CanonicalFrame, phi: &WaveFunction, t: f64) -> Result<f64> {
    let shift = frame.params().m * frame.state(t)?.xdot_nh;
    let spectral = Spectral::new(&phi.grid);
    let minus_i = Complex64::new(0.0, -1.0);
    let eta_phi = WaveFunction {
        grid: phi.grid,
        values: spectral.derivative(&phi.values).into_iter().map(|d| minus_i * d).collect(),
    };
    let lhs = apply_uf1(frame, &eta_phi, t)?;
    let mapped = apply_uf1(frame, phi, t)?;
    let d = spectral.derivative(&mapped.values);
    let rhs: Vec<Complex64> = d.iter().zip(&mapped.values).map(|(dv, v)| minus_i * dv - shift * v).collect();
    Ok(grid_distance(&lhs.values, &rhs, phi.grid.dx()))
}

/// `min_φ ‖U_{F2} ψ_lab(t) − e^{iφ} φ_K(t)‖` with both evolutions started from `psi0`.
pub fn frame_covariance_defect(frame: &CanonicalFrame, psi0: &WaveFunction, t: f64, grid: &GridSpec) -> Result<f64> {
    let lab = evolve_lab(frame.params(), frame.forcing(), psi0, t, grid)?;
    let moving = evolve_moving(frame.params(), psi0, t, grid)?;
    phase_aligned_distance(&apply_uf2(frame, &lab, t)?, &moving)
}

/// `min_φ ‖U_{F1} φ_K(t) − e^{iφ} ψ_lab(t)‖`, the converse of [`frame_covariance_defect`].
pub fn converse_covariance_defect(frame: &CanonicalFrame, psi0: &WaveFunction, t: f64, grid: &GridSpec) -> Result<f64> {
    let lab = evolve_lab(frame.params(), frame.forcing(), psi0, t, grid)?;
    let moving = evolve_moving(frame.params(), psi0, t, grid)?;
    phase_aligned_distance(&apply_uf1(frame, &moving, t)?, &lab)
}
