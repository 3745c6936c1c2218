//! The moving canonical frame that removes the forcing.
//!
//! With `z_nh(t) = (x_nh, m ẋ_nh)` the response from rest, the generating
//! function
//!
//! ```text
//! F1(x, η, t) = (x − x_nh)(η + m ẋ_nh) + G(t)
//! ```
//!
//! maps the forced Hamiltonian onto the free one provided that
//! `m ẍ_nh + mω² x_nh = k` and `Ġ = m ẋ_nh²/2 − mω² x_nh²/2 + x_nh k`.
//! A [`CanonicalFrame`] caches `(x_nh, ẋ_nh, G)` on a uniform time grid and
//! evaluates them exactly between grid points by propagating from the
//! nearest earlier sample.

use crate::classical::{self, OscillatorParams, PhaseState};
use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::quadrature;

/// `(x_nh, ẋ_nh, G)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameSample {
    pub t: f64,
    pub x_nh: f64,
    pub xdot_nh: f64,
    pub g: f64,
}

#[derive(Debug, Clone)]
pub struct CanonicalFrame {
    params: OscillatorParams,
    spec: ForcingSpec,
    tol: f64,
    t_max: f64,
    step: f64,
    samples: Vec<FrameSample>,
}

/// Integrand of the gauge term, `m ẋ²/2 − mω²x²/2 + x k`.
fn gauge_rate(params: &OscillatorParams, x: f64, xdot: f64, k: f64) -> f64 {
    let (m, w) = (params.m, params.omega);
    0.5 * m * xdot * xdot - 0.5 * m * w * w * x * x + x * k
}

/// Builds the frame on `grid_points` equally spaced times in `[0, t_max]`.
pub fn build_frame(
    params: OscillatorParams,
    spec: ForcingSpec,
    t_max: f64,
    grid_points: usize,
    tol: f64,
) -> Result<CanonicalFrame> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::domain(format!("frame needs finite t_max > 0, got {t_max}")));
    }
    if grid_points < 2 {
        return Err(Error::domain("frame needs at least 2 grid points"));
    }
    let step = t_max / (grid_points - 1) as f64;
    let mut frame = CanonicalFrame {
        params,
        spec,
        tol,
        t_max,
        step,
        samples: Vec::with_capacity(grid_points),
    };
    frame.samples.push(FrameSample::default());
    for i in 1..grid_points {
        let t = if i == grid_points - 1 { t_max } else { i as f64 * step };
        let next = frame.advance(&frame.samples[i - 1], t)?;
        frame.samples.push(next);
    }
    Ok(frame)
}

impl CanonicalFrame {
    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn forcing(&self) -> &ForcingSpec {
        &self.spec
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn samples(&self) -> &[FrameSample] {
        &self.samples
    }

    // Exact propagation of a sample to a later time t.
    fn advance(&self, from: &FrameSample, t: f64) -> Result<FrameSample> {
        let (params, spec, tol) = (&self.params, &self.spec, self.tol);
        let m = params.m;
        let start = PhaseState::new(from.x_nh, m * from.xdot_nh);
        let state_at = |s: f64| -> Result<PhaseState> {
            let u = classical::propagator(params, s - from.t)?;
            Ok(u.apply(start) + classical::duhamel_segment(params, spec, from.t, s, tol)?)
        };
        let z = state_at(t)?;
        let mut knots = vec![from.t];
        knots.extend(spec.breakpoints(from.t, t));
        knots.push(t);
        // A failed inner quadrature poisons the integrand with NaN, which the
        // outer rule then reports as non-convergence.
        let dg = quadrature::gauss_kronrod_scalar(
            |s| match state_at(s) {
                Ok(z) => gauge_rate(params, z.x, z.p / m, spec.value(s)),
                Err(_) => f64::NAN,
            },
            &knots,
            tol,
        );
        let dg = match dg {
            Ok(v) if v.is_finite() => v,
            Ok(_) => {
                return Err(Error::Quadrature {
                    partial: f64::NAN,
                    error_estimate: f64::INFINITY,
                })
            }
            Err(e) => return Err(e),
        };
        Ok(FrameSample {
            t,
            x_nh: z.x,
            xdot_nh: z.p / m,
            g: from.g + dg,
        })
    }

    fn check_range(&self, t: f64) -> Result<()> {
        let slack = 1e-12 * self.t_max.max(1.0);
        if t.is_finite() && t >= -slack && t <= self.t_max + slack {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "time {t} outside the frame range [0, {}]",
                self.t_max
            )))
        }
    }

    /// Exact `(x_nh, ẋ_nh, G)` at `t`. Grid times return the cached sample.
    pub fn state(&self, t: f64) -> Result<FrameSample> {
        self.check_range(t)?;
        let t = t.clamp(0.0, self.t_max);
        let i = ((t / self.step).floor() as usize).min(self.samples.len() - 1);
        let base = &self.samples[i];
        if base.t == t {
            return Ok(*base);
        }
        if base.t > t {
            // rounding put t just below a grid point
            return self.advance(&self.samples[i - 1], t);
        }
        self.advance(base, t)
    }

    /// Cubic Hermite interpolation of the cached samples, using the exact
    /// time derivatives at the nodes.
    pub fn interpolate(&self, t: f64) -> Result<FrameSample> {
        self.check_range(t)?;
        let t = t.clamp(0.0, self.t_max);
        let i = ((t / self.step).floor() as usize).min(self.samples.len() - 2);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let h = b.t - a.t;
        let s = (t - a.t) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        let herm = |ya: f64, da: f64, yb: f64, db: f64| h00 * ya + h10 * h * da + h01 * yb + h11 * h * db;
        let w2 = self.params.omega * self.params.omega;
        let accel = |p: &FrameSample| self.spec.value(p.t) / self.params.m - w2 * p.x_nh;
        let grate = |p: &FrameSample| gauge_rate(&self.params, p.x_nh, p.xdot_nh, self.spec.value(p.t));
        Ok(FrameSample {
            t,
            x_nh: herm(a.x_nh, a.xdot_nh, b.x_nh, b.xdot_nh),
            xdot_nh: herm(a.xdot_nh, accel(a), b.xdot_nh, accel(b)),
            g: herm(a.g, grate(a), b.g, grate(b)),
        })
    }

    /// `θ(x, t) = (x − x_nh) m ẋ_nh + G`.
    pub fn theta(&self, x: f64, t: f64) -> Result<f64> {
        let s = self.state(t)?;
        Ok(theta_at(&s, self.params.m, x))
    }

    /// `θ′(ξ, t) = −(ξ + x_nh) m ẋ_nh + G`.
    pub fn theta_prime(&self, xi: f64, t: f64) -> Result<f64> {
        let s = self.state(t)?;
        Ok(theta_prime_at(&s, self.params.m, xi))
    }

    /// `F1(x, η, t) = (x − x_nh)(η + m ẋ_nh) + G`.
    pub fn f1(&self, x: f64, eta: f64, t: f64) -> Result<f64> {
        let s = self.state(t)?;
        Ok((x - s.x_nh) * (eta + self.params.m * s.xdot_nh) + s.g)
    }

    /// `F2(ξ, p, t) = (ξ + x_nh)(p − m ẋ_nh) + G`.
    pub fn f2(&self, xi: f64, p: f64, t: f64) -> Result<f64> {
        let s = self.state(t)?;
        Ok((xi + s.x_nh) * (p - self.params.m * s.xdot_nh) + s.g)
    }

    /// Laboratory `(x, p)` to moving `(ξ, η) = (x − x_nh, p − m ẋ_nh)`.
    pub fn to_moving(&self, z: PhaseState, t: f64) -> Result<PhaseState> {
        let s = self.state(t)?;
        Ok(PhaseState::new(z.x - s.x_nh, z.p - self.params.m * s.xdot_nh))
    }

    /// Inverse of [`to_moving`](Self::to_moving).
    pub fn to_lab(&self, z: PhaseState, t: f64) -> Result<PhaseState> {
        let s = self.state(t)?;
        Ok(PhaseState::new(z.x + s.x_nh, z.p + self.params.m * s.xdot_nh))
    }

    /// Finite-difference step used by the residual checks.
    pub fn fd_step(t: f64) -> f64 {
        1e-5 * t.max(1.0)
    }

    /// `|m ẍ_nh + mω² x_nh − k|` with `ẍ_nh` by central differences.
    pub fn newton_residual(&self, t: f64) -> Result<f64> {
        let h = Self::fd_step(t);
        let (lo, mid, hi) = (self.state(t - h)?, self.state(t)?, self.state(t + h)?);
        let xddot = (hi.xdot_nh - lo.xdot_nh) / (2.0 * h);
        let m = self.params.m;
        let w2 = self.params.omega * self.params.omega;
        Ok((m * xddot + m * w2 * mid.x_nh - self.spec.value(t)).abs())
    }

    /// `|Ġ − m ẋ_nh²/2 + mω² x_nh²/2 − x_nh k|` with `Ġ` by central differences.
    pub fn gauge_residual(&self, t: f64) -> Result<f64> {
        let h = Self::fd_step(t);
        let (lo, mid, hi) = (self.state(t - h)?, self.state(t)?, self.state(t + h)?);
        let gdot = (hi.g - lo.g) / (2.0 * h);
        Ok((gdot - gauge_rate(&self.params, mid.x_nh, mid.xdot_nh, self.spec.value(t))).abs())
    }

    /// `|K(ξ, η) − H(x, p) − ∂F1/∂t|` where `ξ = ∂F1/∂η`, `p = ∂F1/∂x`
    /// and the time derivative is a central difference.
    pub fn transformation_law_residual(&self, x: f64, eta: f64, t: f64) -> Result<f64> {
        let h = Self::fd_step(t);
        let df1 = (self.f1(x, eta, t + h)? - self.f1(x, eta, t - h)?) / (2.0 * h);
        let s = self.state(t)?;
        let (m, w) = (self.params.m, self.params.omega);
        let xi = x - s.x_nh;
        let p = eta + m * s.xdot_nh;
        let k_new = eta * eta / (2.0 * m) + 0.5 * m * w * w * xi * xi;
        let h_old = p * p / (2.0 * m) + 0.5 * m * w * w * x * x - x * self.spec.value(t);
        Ok((k_new - h_old - df1).abs())
    }
}

pub(crate) fn theta_at(s: &FrameSample, m: f64, x: f64) -> f64 {
    (x - s.x_nh) * m * s.xdot_nh + s.g
}

pub(crate) fn theta_prime_at(s: &FrameSample, m: f64, xi: f64) -> f64 {
    -(xi + s.x_nh) * m * s.xdot_nh + s.g
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_constant() -> CanonicalFrame {
        build_frame(
            OscillatorParams::new(1.0, 1.0).unwrap(),
            ForcingSpec::constant(1.0).unwrap(),
            PI,
            33,
            1e-12,
        )
        .unwrap()
    }

    #[test]
    fn zero_forcing_frame_vanishes() {
        let f = build_frame(OscillatorParams::new(2.0, 1.5).unwrap(), ForcingSpec::Zero, 5.0, 11, 1e-10).unwrap();
        for t in [0.0, 0.3, 2.5, 5.0] {
            let s = f.state(t).unwrap();
            assert_eq!((s.x_nh, s.xdot_nh, s.g), (0.0, 0.0, 0.0));
            assert_eq!(f.theta(1.7, t).unwrap(), 0.0);
            assert_eq!(f.theta_prime(-0.4, t).unwrap(), 0.0);
            assert_eq!(f.f1(1.5, 2.0, t).unwrap(), 3.0);
            let z = PhaseState::new(0.2, -1.1);
            assert_eq!(f.to_moving(z, t).unwrap(), z);
        }
    }

    #[test]
    fn gauge_at_half_period() {
        // integrand reduces to sin²s; ∫₀^π sin² = π/2
        let f = unit_constant();
        let s = f.state(PI).unwrap();
        assert!((s.g - PI / 2.0).abs() < 1e-12);
        assert!((s.x_nh - 2.0).abs() < 1e-13);
        assert!(s.xdot_nh.abs() < 1e-13);
    }

    #[test]
    fn phases_and_generating_functions() {
        let f = unit_constant();
        let t = PI / 2.0;
        let s = f.state(t).unwrap();
        // G(π/2) = ∫₀^{π/2} sin² = π/4
        assert!((s.g - PI / 4.0).abs() < 1e-12);
        assert!((f.theta(s.x_nh, t).unwrap() - s.g).abs() < 1e-15);
        assert!((f.theta(2.0, t).unwrap() - (1.0 + PI / 4.0)).abs() < 1e-12);
        assert!((f.theta_prime(-s.x_nh, t).unwrap() - s.g).abs() < 1e-15);
        assert!((f.theta_prime(0.0, t).unwrap() - (-1.0 + PI / 4.0)).abs() < 1e-12);
        assert!((f.f1(s.x_nh, 3.3, t).unwrap() - s.g).abs() < 1e-15);
        assert!((f.f2(1.0, 0.0, PI).unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn moving_coordinates() {
        let f = unit_constant();
        let z = f.to_moving(PhaseState::new(2.0, 0.0), PI).unwrap();
        assert!(z.max_abs() < 1e-12);
        let z = PhaseState::new(0.3, -0.9);
        let back = f.to_lab(f.to_moving(z, 1.234).unwrap(), 1.234).unwrap();
        assert!((back - z).max_abs() < 1e-15);
    }

    #[test]
    fn out_of_range_is_domain_error() {
        let f = unit_constant();
        assert!(matches!(f.state(4.0), Err(Error::Domain(_))));
        assert!(f.theta(0.0, -0.5).is_err());
    }

    #[test]
    fn build_rejects_bad_grid() {
        let p = OscillatorParams::new(1.0, 1.0).unwrap();
        assert!(build_frame(p, ForcingSpec::Zero, 0.0, 10, 1e-10).is_err());
        assert!(build_frame(p, ForcingSpec::Zero, 1.0, 1, 1e-10).is_err());
    }

    #[test]
    fn interpolation_tracks_exact_state() {
        let f = build_frame(
            OscillatorParams::new(1.5, 1.2).unwrap(),
            ForcingSpec::sinusoid(0.8, 2.0, 0.3).unwrap(),
            4.0,
            401,
            1e-12,
        )
        .unwrap();
        for &t in &[0.013, 1.777, 3.999] {
            let (a, b) = (f.state(t).unwrap(), f.interpolate(t).unwrap());
            assert!((a.x_nh - b.x_nh).abs() < 1e-8);
            assert!((a.xdot_nh - b.xdot_nh).abs() < 1e-8);
            assert!((a.g - b.g).abs() < 1e-8);
        }
    }

    #[test]
    fn residuals_small_for_general_mass() {
        let f = build_frame(
            OscillatorParams::new(2.0, 0.8).unwrap(),
            ForcingSpec::sinusoid(1.0, 2.0, 0.0).unwrap(),
            3.0,
            31,
            1e-12,
        )
        .unwrap();
        for &t in &[0.5, 1.3, 2.71] {
            assert!(f.newton_residual(t).unwrap() < 1e-6);
            assert!(f.gauge_residual(t).unwrap() < 1e-6);
            assert!(f.transformation_law_residual(0.7, -0.3, t).unwrap() < 1e-6);
        }
    }
}
