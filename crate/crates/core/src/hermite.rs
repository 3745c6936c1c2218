//! Hermite polynomials, oscillator eigenstates and Gauss–Hermite rules.
//!
//! Physicists' convention throughout: `e^{2xu − u²} = Σ uⁿ Hₙ(x)/n!`, and
//! `ħ = 1`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::classical::OscillatorParams;
use crate::error::{Error, Result};

/// Largest Gauss–Hermite order accepted by [`gauss_hermite_rule`].
pub const MAX_GAUSS_HERMITE_ORDER: usize = 200;

const RESCALE_THRESHOLD: f64 = 1e150;

/// An oscillator together with a quantum number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenstateParams {
    pub params: OscillatorParams,
    pub n: usize,
}

impl EigenstateParams {
    pub fn value(&self, x: f64) -> Result<f64> {
        eigenstate(&self.params, self.n, x)
    }

    pub fn energy(&self) -> f64 {
        eigen_energy(&self.params, self.n)
    }
}

/// `Hₙ(x)` from `H_{n+1} = 2x Hₙ − 2n H_{n−1}`.
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Partial sum `Σ_{n ≤ N} uⁿ Hₙ(x) / n!` of the generating function.
///
/// The terms `gₙ = uⁿ Hₙ(x)/n!` obey `g_{n+1} = 2u(x gₙ − u g_{n−1})/(n+1)`,
/// which avoids forming `Hₙ` and `n!` separately.
pub fn generating_function_partial(x: f64, u: f64, truncation: usize) -> f64 {
    let mut prev = 1.0;
    let mut sum = prev;
    if truncation == 0 {
        return sum;
    }
    let mut cur = 2.0 * x * u;
    sum += cur;
    for n in 1..truncation {
        let next = 2.0 * u * (x * cur - u * prev) / (n + 1) as f64;
        prev = cur;
        cur = next;
        sum += cur;
    }
    sum
}

/// `∫ e^{zx} e^{−x²} dx = √π e^{z²/4}`.
pub fn gaussian_integral(z: Complex64) -> Complex64 {
    std::f64::consts::PI.sqrt() * (z * z / 4.0).exp()
}

/// `Eₙ = ω (n + 1/2)`.
pub fn eigen_energy(params: &OscillatorParams, n: usize) -> f64 {
    params.omega * (n as f64 + 0.5)
}

/// Normalized Hermite recurrence `Hₙ(y)/√(2ⁿ n!)` as `(sign, ln|value|)`.
pub(crate) fn scaled_hermite_log(n: usize, y: f64) -> (f64, f64) {
    let mut log_scale = 0.0;
    let (mut prev, mut cur) = (1.0, std::f64::consts::SQRT_2 * y);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_THRESHOLD {
            prev /= RESCALE_THRESHOLD;
            cur /= RESCALE_THRESHOLD;
            log_scale += RESCALE_THRESHOLD.ln();
        }
    }
    if cur == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    (cur.signum(), cur.abs().ln() + log_scale)
}

/// Oscillator eigenfunction
/// `Ψₙ(x) = (2ⁿ n!)^{−1/2} (mω/π)^{1/4} Hₙ(√(mω) x) e^{−mωx²/2}`.
///
/// Accumulated in log magnitude with sign tracking, so large `n` or `|x|`
/// neither overflow nor produce `inf · 0`.
pub fn eigenstate(params: &OscillatorParams, n: usize, x: f64) -> Result<f64> {
    let mw = params.m * params.omega;
    if mw <= 0.0 {
        return Err(Error::domain("eigenstates need omega > 0"));
    }
    let y = mw.sqrt() * x;
    let (sign, log_h) = scaled_hermite_log(n, y);
    if sign == 0.0 {
        return Ok(0.0);
    }
    let log_norm = 0.25 * (mw / std::f64::consts::PI).ln();
    Ok(sign * (log_h + log_norm - 0.5 * y * y).exp())
}

/// Gauss–Hermite nodes and weights for the weight `e^{−x²}`.
///
/// Nodes start from the eigenvalues of the symmetric Jacobi matrix and are
/// polished by Newton steps on the orthonormal recurrence; weights come
/// from the Christoffel sum `1/Σₖ pₖ(xᵢ)²`.
pub fn gauss_hermite_rule(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 || order > MAX_GAUSS_HERMITE_ORDER {
        return Err(Error::domain(format!(
            "Gauss-Hermite order must be in 1..={MAX_GAUSS_HERMITE_ORDER}, got {order}"
        )));
    }
    let jacobi = DMatrix::from_fn(order, order, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);

    let mut weights = Vec::with_capacity(order);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _) = orthonormal_hermite(order, *x);
            let dx = p / dp;
            if dx.is_finite() {
                *x -= dx;
            }
        }
        let (_, _, christoffel) = orthonormal_hermite(order, *x);
        weights.push(if christoffel.is_finite() { 1.0 / christoffel } else { 0.0 });
    }
    // Enforce exact symmetry of the rule.
    for i in 0..order / 2 {
        let j = order - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    Ok((nodes, weights))
}

// (p_n(x), p_n'(x), Σ_{k<n} p_k(x)²) for polynomials orthonormal under e^{−x²}.
fn orthonormal_hermite(n: usize, x: f64) -> (f64, f64, f64) {
    let p0 = std::f64::consts::PI.powf(-0.25);
    let (mut prev, mut cur) = (0.0, p0);
    let mut sum = 0.0;
    for k in 0..n {
        sum += cur * cur;
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    // p_n' = √(2n) p_{n−1}
    (cur, (2.0 * n as f64).sqrt() * prev, sum)
}

/// Integrates `f(x) e^{−x²}` with the given rule.
pub fn integrate_with_rule<F: Fn(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), f: F) -> f64 {
    rule.0.iter().zip(&rule.1).map(|(&x, &w)| w * f(x)).sum()
}
