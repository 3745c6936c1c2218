//! Independent numerical references used to cross-check the closed forms:
//! an adaptive Dormand–Prince integrator for the equations of motion and a
//! composite Gauss–Legendre rule.
//!
//! Nothing in here calls back into the propagator, the Duhamel quadrature
//! or the frame construction, so agreement is a genuine check.

use crate::classical::{OscillatorParams, PhaseState};
use crate::forcing::ForcingSpec;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand–Prince 5(4) integration of `y' = f(t, y)` from `t0` to
/// `t1`, restarting at every interior `knot` so that discontinuities in `f`
/// never fall inside a step.
pub fn integrate_ode<const N: usize, F>(
    f: F,
    y0: [f64; N],
    t0: f64,
    t1: f64,
    knots: &[f64],
    rtol: f64,
    atol: f64,
) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut stops: Vec<f64> = knots.iter().copied().filter(|&k| k > t0 && k < t1).collect();
    stops.push(t1);
    stops.sort_by(f64::total_cmp);
    let mut y = y0;
    let mut t = t0;
    let mut h = ((t1 - t0) * 1e-3).max(1e-6);
    for stop in stops {
        while t < stop {
            let step = h.min(stop - t);
            let (y_new, err) = dopri_step(&f, t, &y, step, rtol, atol);
            if err <= 1.0 {
                // land exactly on the stop to avoid a sliver step
                t = if step == stop - t { stop } else { t + step };
                y = y_new;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = step * factor;
        }
    }
    y
}

fn dopri_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64, rtol: f64, atol: f64) -> ([f64; N], f64)
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut k = [[0.0; N]; 7];
    for s in 0..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            for i in 0..N {
                ys[i] += h * A[s][j] * kj[i];
            }
        }
        k[s] = f(t + C[s] * h, &ys);
    }
    let mut y5 = *y;
    let mut err_sq = 0.0;
    for i in 0..N {
        let mut e = 0.0;
        for s in 0..7 {
            y5[i] += h * B5[s] * k[s][i];
            e += h * (B5[s] - B4[s]) * k[s][i];
        }
        let scale = atol + rtol * y[i].abs().max(y5[i].abs());
        err_sq += (e / scale).powi(2);
    }
    (y5, (err_sq / N as f64).sqrt())
}

fn oscillator_rhs(params: &OscillatorParams, spec: &ForcingSpec, t: f64, x: f64, p: f64) -> [f64; 2] {
    let w2 = params.omega * params.omega;
    [p / params.m, -params.m * w2 * x + spec.value(t)]
}

/// Hamilton's equations for `H = p²/2m + mω²x²/2 − x k(t)`, integrated numerically.
pub fn forced_oscillator_rk(
    params: &OscillatorParams,
    spec: &ForcingSpec,
    z0: PhaseState,
    t: f64,
    rtol: f64,
) -> PhaseState {
    let knots = spec.breakpoints(0.0, t);
    let y = integrate_ode(
        |s, y: &[f64; 2]| oscillator_rhs(params, spec, s, y[0], y[1]),
        [z0.x, z0.p],
        0.0,
        t,
        &knots,
        rtol,
        rtol * 1e-2,
    );
    PhaseState::new(y[0], y[1])
}

/// `(x_nh, p_nh, G)` at `t`, integrating the equations of motion together
/// with `Ġ = mẋ²/2 − mω²x²/2 + x k` from rest.
pub fn frame_rk(params: &OscillatorParams, spec: &ForcingSpec, t: f64, rtol: f64) -> [f64; 3] {
    let knots = spec.breakpoints(0.0, t);
    let (m, w2) = (params.m, params.omega * params.omega);
    integrate_ode(
        |s, y: &[f64; 3]| {
            let k = spec.value(s);
            let xdot = y[1] / m;
            [xdot, -m * w2 * y[0] + k, 0.5 * m * xdot * xdot - 0.5 * m * w2 * y[0] * y[0] + y[0] * k]
        },
        [0.0; 3],
        0.0,
        t,
        &knots,
        rtol,
        rtol * 1e-2,
    )
}

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre quadrature of `f` over `[a, b]` with `panels`
/// equal panels of `order` points each.
pub fn composite_gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for j in 0..panels {
        let lo = a + j as f64 * h;
        let mid = lo + 0.5 * h;
        let panel: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum();
        total += 0.5 * h * panel;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let moment: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((moment - 2.0 / 19.0).abs() < 1e-14);
        let (x, w) = gauss_legendre(7);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x[3].abs() < 1e-16);
    }

    #[test]
    fn composite_rule_on_kinked_integrand() {
        // kink at 1/4 and 3/4 falls on panel edges with 4 panels
        let v = composite_gauss_legendre(|s| (2.0 * PI * s).cos().abs(), 0.0, 1.0, 4, 20);
        assert!((v - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn rk_harmonic_period() {
        let y = integrate_ode(|_, y: &[f64; 2]| [y[1], -y[0]], [1.0, 0.0], 0.0, 2.0 * PI, &[], 1e-12, 1e-14);
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }
}
