//! Transition amplitudes between oscillator eigenstates induced by the force.
//!
//! In the moving frame an eigenstate only picks up a phase, so
//! `|⟨Ψₘ, Ψₙ(t)⟩|` reduces to the overlap of `Ψₘ` with `Ψₙ` shifted by
//! `x_nh(t)` and boosted by `m ẋ_nh(t)`. In the dimensionless variables
//! `a = √(mω) x_nh`, `b = ẋ_nh √(m/ω)` the generating functions give
//!
//! ```text
//! ∫ G(x+a, v) G(x, u) e^{−ixb} e^{−(x+a)²/2 − x²/2} dx
//!     = √π exp(2uv + v(a − ib) − u(a + ib) − (a² + b²)/4 + iab/2)
//! ```
//!
//! and the amplitude is the `uⁿvᵐ/(n! m!)` coefficient times
//! `C(m, n) = (2^{m+n} m! n! π)^{−1/2}`. The constant term is obtained by
//! completing the square; it differs from the often quoted `−(a − ib)²/4`
//! in the sign of `b²`, and only this form keeps probabilities bounded by 1.

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::factorial::{factorial, ln_factorial};

use crate::canonical::CanonicalFrame;
use crate::error::{Error, Result};
use crate::hermite;

/// Row computation gives up past this quantum number.
pub const MAX_ROW_M: usize = 500;

// Below this n + m the k-sum uses plain factorials and powers.
const DIRECT_SUM_LIMIT: usize = 30;

/// Dimensionless displacement `a` and velocity `b` of the moving frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct DisplacementParams {
    pub a: f64,
    pub b: f64,
}

impl DisplacementParams {
    pub fn new(a: f64, b: f64) -> Self {
        DisplacementParams { a, b }
    }

    /// `a = √(mω) x_nh(t)`, `b = ẋ_nh(t) √(m/ω)`.
    pub fn from_frame(frame: &CanonicalFrame, t: f64) -> Result<Self> {
        let p = frame.params();
        if p.omega <= 0.0 {
            return Err(Error::domain("transition probabilities need omega > 0"));
        }
        let s = frame.state(t)?;
        Ok(DisplacementParams {
            a: (p.m * p.omega).sqrt() * s.x_nh,
            b: s.xdot_nh * (p.m / p.omega).sqrt(),
        })
    }

    /// Mean excitation `λ = (a² + b²)/2` of the coherent state reached from the ground state.
    pub fn lambda(&self) -> f64 {
        0.5 * (self.a * self.a + self.b * self.b)
    }
}

/// `⟨Ψₘ, Ψₙ(t)⟩` up to the global phase `e^{−iEₙt − iG(t)}`.
pub fn overlap_amplitude(n: usize, m: usize, d: DisplacementParams) -> Complex64 {
    if d.a == 0.0 && d.b == 0.0 {
        return if n == m { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    let (a, b) = (d.a, d.b);
    let c = Complex64::new(-0.25 * (a * a + b * b), 0.5 * a * b);
    let beta = Complex64::new(a, -b) / std::f64::consts::SQRT_2;
    let minus_beta_bar = -beta.conj();
    let kmax = n.min(m);

    if n + m <= DIRECT_SUM_LIMIT {
        let root = (factorial(m as u64) * factorial(n as u64)).sqrt();
        let sum: Complex64 = (0..=kmax)
            .map(|k| {
                let coeff = root / (factorial(k as u64) * factorial((m - k) as u64) * factorial((n - k) as u64));
                coeff * beta.powu((m - k) as u32) * minus_beta_bar.powu((n - k) as u32)
            })
            .sum();
        return c.exp() * sum;
    }

    let (ln_beta, ln_mbb) = (beta.ln(), minus_beta_bar.ln());
    let half_root = 0.5 * (ln_factorial(m as u64) + ln_factorial(n as u64));
    (0..=kmax)
        .map(|k| {
            let ln_coeff = half_root
                - ln_factorial(k as u64)
                - ln_factorial((m - k) as u64)
                - ln_factorial((n - k) as u64);
            (c + ln_coeff + (m - k) as f64 * ln_beta + (n - k) as f64 * ln_mbb).exp()
        })
        .sum()
}

/// Result of the quadrature oracle with its accuracy flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleAmplitude {
    pub value: Complex64,
    pub order: usize,
    /// `false` when `order < n + m + 10`; the value may then be inaccurate.
    pub order_sufficient: bool,
}

/// Direct Gauss–Hermite evaluation of
/// `C(m, n) ∫ Hₘ(x+a) Hₙ(x) e^{−ixb} e^{−(x+a)²/2} e^{−x²/2} dx`.
///
/// With `s = x + a/2` the Gaussian factors become `e^{−a²/4} e^{−s²}`.
pub fn overlap_quadrature_oracle(
    n: usize,
    m: usize,
    d: DisplacementParams,
    order: usize,
) -> Result<OracleAmplitude> {
    let (nodes, weights) = hermite::gauss_hermite_rule(order)?;
    let (a, b) = (d.a, d.b);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&s, &w) in nodes.iter().zip(&weights) {
        if w == 0.0 {
            continue;
        }
        // C(m,n) Hₘ Hₙ = π^{-1/2} · [Hₘ/√(2ᵐm!)] · [Hₙ/√(2ⁿn!)]
        let (sm, lm) = hermite::scaled_hermite_log(m, s + 0.5 * a);
        let (sn, ln) = hermite::scaled_hermite_log(n, s - 0.5 * a);
        let mag = sm * sn * (lm + ln + w.ln()).exp();
        let phase = Complex64::from_polar(1.0, -b * (s - 0.5 * a));
        acc += mag * phase;
    }
    let value = acc * (-0.25 * a * a).exp() / std::f64::consts::PI.sqrt();
    Ok(OracleAmplitude {
        value,
        order,
        order_sufficient: order >= n + m + 10,
    })
}

/// `P_{n,m}(t) = |⟨Ψₘ, Ψₙ(t)⟩|²`.
pub fn transition_probability(n: usize, m: usize, frame: &CanonicalFrame, t: f64) -> Result<f64> {
    let d = DisplacementParams::from_frame(frame, t)?;
    Ok(overlap_amplitude(n, m, d).norm_sqr().min(1.0))
}

/// `|⟨Ψ₀, Ψ₀(t)⟩|² = e^{−(a² + b²)/2}`.
pub fn ground_state_survival(frame: &CanonicalFrame, t: f64) -> Result<f64> {
    Ok((-DisplacementParams::from_frame(frame, t)?.lambda()).exp())
}

/// `P_{n,m}(t)` for `m = 0, 1, …` until the row sums to `1 − tail_tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionRow {
    pub n: usize,
    pub t: f64,
    pub lambda: f64,
    pub probabilities: Vec<f64>,
    #[serde(skip)]
    pub truncation_m: usize,
    /// Probability not accounted for by the listed entries.
    pub tail_bound: f64,
}

impl TransitionRow {
    pub fn partial_sum(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

pub fn probability_row(n: usize, frame: &CanonicalFrame, t: f64, tail_tol: f64) -> Result<TransitionRow> {
    if !(tail_tol > 0.0) {
        return Err(Error::domain("tail tolerance must be positive"));
    }
    let d = DisplacementParams::from_frame(frame, t)?;
    row_for_displacement(n, t, d, tail_tol)
}

pub(crate) fn row_for_displacement(n: usize, t: f64, d: DisplacementParams, tail_tol: f64) -> Result<TransitionRow> {
    let mut probabilities = Vec::new();
    let mut sum = 0.0;
    for m in 0..=MAX_ROW_M {
        let p = overlap_amplitude(n, m, d).norm_sqr().min(1.0);
        probabilities.push(p);
        sum += p;
        if sum >= 1.0 - tail_tol {
            return Ok(TransitionRow {
                n,
                t,
                lambda: d.lambda(),
                probabilities,
                truncation_m: m,
                tail_bound: (1.0 - sum).max(0.0),
            });
        }
    }
    Err(Error::RowTruncation {
        max_m: MAX_ROW_M,
        partial_sum: sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::build_frame;
    use crate::classical::OscillatorParams;
    use crate::forcing::ForcingSpec;
    use std::f64::consts::PI;

    fn poisson(lambda: f64, m: usize) -> f64 {
        (-lambda + m as f64 * lambda.ln() - ln_factorial(m as u64)).exp()
    }

    // Associated Laguerre L_n^α(x) by its three-term recurrence.
    fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
        let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
        if n == 0 {
            return prev;
        }
        for k in 1..n {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn zero_displacement_is_identity() {
        for n in 0..6 {
            for m in 0..6 {
                let v = overlap_amplitude(n, m, DisplacementParams::default());
                assert_eq!(v, Complex64::new(if n == m { 1.0 } else { 0.0 }, 0.0));
            }
        }
    }

    #[test]
    fn first_excitation_magnitude() {
        let d = DisplacementParams::new(1.0, 0.0);
        let expected = (-0.25f64).exp() / 2f64.sqrt();
        assert!((overlap_amplitude(0, 1, d).norm() - expected).abs() < 1e-15);
        assert!((overlap_amplitude(1, 0, d).norm() - expected).abs() < 1e-15);
        let oracle = overlap_quadrature_oracle(0, 1, d, 40).unwrap();
        assert!((oracle.value.norm() - expected).abs() < 1e-14);
    }

    #[test]
    fn oracle_examples() {
        let o = overlap_quadrature_oracle(0, 0, DisplacementParams::default(), 20).unwrap();
        assert!((o.value - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let d = DisplacementParams::new(2.0, 0.0);
        let lo = overlap_quadrature_oracle(0, 0, d, 40).unwrap().value.norm();
        let hi = overlap_quadrature_oracle(0, 0, d, 80).unwrap().value.norm();
        assert!((lo - (-1f64).exp()).abs() < 1e-14);
        assert!((lo - hi).abs() < 1e-14);
        assert!(!overlap_quadrature_oracle(5, 5, d, 12).unwrap().order_sufficient);
        assert!(overlap_quadrature_oracle(0, 0, d, 201).is_err());
    }

    #[test]
    fn closed_form_matches_oracle_including_phase() {
        for &(a, b) in &[(0.3, -1.2), (2.5, 0.7), (-1.9, 2.9)] {
            let d = DisplacementParams::new(a, b);
            for n in 0..=10 {
                for m in 0..=10 {
                    let closed = overlap_amplitude(n, m, d);
                    let oracle = overlap_quadrature_oracle(n, m, d, 120).unwrap().value;
                    assert!((closed - oracle).norm() < 1e-10, "n={n} m={m} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn log_space_branch_agrees_with_direct_branch() {
        // n + m = 31 goes through the log branch; compare against the oracle.
        let d = DisplacementParams::new(1.1, -0.6);
        let closed = overlap_amplitude(15, 16, d);
        let oracle = overlap_quadrature_oracle(15, 16, d, 160).unwrap().value;
        assert!((closed - oracle).norm() < 1e-10);
    }

    #[test]
    fn laguerre_cross_check() {
        let d = DisplacementParams::new(1.4, -0.8);
        let lambda = d.lambda();
        for n in 0..8usize {
            for m in 0..8usize {
                let (lo, hi) = (n.min(m), n.max(m));
                let diff = (hi - lo) as f64;
                let ratio = (ln_factorial(lo as u64) - ln_factorial(hi as u64)).exp();
                let expected = ratio * lambda.powf(diff) * (-lambda).exp() * laguerre(lo, diff, lambda).powi(2);
                let got = overlap_amplitude(n, m, d).norm_sqr();
                assert!((got - expected).abs() < 1e-12, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn ground_row_is_poisson() {
        let d = DisplacementParams::new(1.0, 1.0);
        assert!((overlap_amplitude(0, 2, d).norm_sqr() - (-1f64).exp() / 2.0).abs() < 1e-15);
        let row = row_for_displacement(0, 0.0, d, 1e-13).unwrap();
        for (m, p) in row.probabilities.iter().enumerate() {
            assert!((p - poisson(1.0, m)).abs() < 1e-14);
        }
        assert!(row.tail_bound <= 1e-13);
    }

    #[test]
    fn frame_driven_probabilities() {
        let frame = build_frame(
            OscillatorParams::new(1.0, 1.0).unwrap(),
            ForcingSpec::constant(1.0).unwrap(),
            PI,
            65,
            1e-12,
        )
        .unwrap();
        assert_eq!(transition_probability(0, 0, &frame, 0.0).unwrap(), 1.0);
        let survival = ground_state_survival(&frame, PI).unwrap();
        assert!((survival - (-2f64).exp()).abs() < 1e-12);
        assert!((transition_probability(0, 0, &frame, PI).unwrap() - survival).abs() < 1e-13);
        let row = probability_row(3, &frame, 2.0, 1e-12).unwrap();
        assert!((row.partial_sum() - 1.0).abs() < 1e-11);
        assert!(row.probabilities.iter().all(|p| (0.0..=1.0).contains(p)));
    }

    #[test]
    fn zero_forcing_row() {
        let frame = build_frame(OscillatorParams::new(1.0, 2.0).unwrap(), ForcingSpec::Zero, 3.0, 4, 1e-10).unwrap();
        let row = probability_row(0, &frame, 1.7, 1e-12).unwrap();
        assert_eq!(row.probabilities, vec![1.0]);
        assert_eq!(row.truncation_m, 0);
        let row = probability_row(2, &frame, 1.7, 1e-12).unwrap();
        assert_eq!(row.probabilities, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn row_needs_positive_tail_and_oscillator() {
        let frame = build_frame(OscillatorParams::new(1.0, 2.0).unwrap(), ForcingSpec::Zero, 3.0, 4, 1e-10).unwrap();
        assert!(probability_row(0, &frame, 1.0, 0.0).is_err());
        let free = build_frame(OscillatorParams::new(1.0, 0.0).unwrap(), ForcingSpec::Zero, 3.0, 4, 1e-10).unwrap();
        assert!(ground_state_survival(&free, 1.0).is_err());
    }

    #[test]
    fn row_json_shape() {
        let row = row_for_displacement(0, 0.5, DisplacementParams::new(0.0, 0.0), 1e-12).unwrap();
        let json = serde_json::to_string(&row).unwrap();
        assert_eq!(json, r#"{"n":0,"t":0.5,"lambda":0.0,"probabilities":[1.0],"tail_bound":0.0}"#);
    }
}
