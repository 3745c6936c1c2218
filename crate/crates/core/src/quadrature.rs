//! Adaptive quadrature used by the forcing diagnostics, the Duhamel integral
//! and the gauge integral of the moving frame.
//!
//! Two schemes live here: adaptive Simpson with interval bisection (for
//! integrands with kinks such as `|k(t)|`) and a globally adaptive
//! Gauss–Kronrod 7/15 rule for vector-valued smooth integrands.

use crate::error::{Error, Result};

const SIMPSON_MAX_DEPTH: u32 = 60;
const GK_MAX_SEGMENTS: usize = 4000;

// Kronrod abscissae on [0, 1); odd indices are the embedded Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Adaptive Simpson quadrature of `f` over each consecutive pair of `knots`.
///
/// `knots` must be sorted; integrand kinks placed on knots converge faster.
/// The tolerance is relative to the magnitude of the integral, with an
/// absolute floor of `rel_tol * f64::MIN_POSITIVE`.
pub fn adaptive_simpson<F>(f: F, knots: &[f64], rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if knots.len() < 2 {
        return Ok(0.0);
    }
    // Coarse pass to turn the relative tolerance into an absolute one.
    let mut coarse = 0.0;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / 16.0;
        for j in 0..16 {
            let lo = a + j as f64 * h;
            let hi = lo + h;
            coarse += simpson(f(lo), f(0.5 * (lo + hi)), f(hi), hi - lo).abs();
        }
    }
    let abs_tol = (rel_tol * coarse).max(f64::MIN_POSITIVE);

    let mut total = 0.0;
    let mut failed = false;
    let span = knots[knots.len() - 1] - knots[0];
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        let whole = simpson(fa, fm, fb, b - a);
        let share = abs_tol * (b - a) / span;
        total += simpson_step(&f, a, b, fa, fm, fb, whole, share, SIMPSON_MAX_DEPTH, &mut failed);
    }
    if failed {
        return Err(Error::Quadrature {
            partial: total,
            error_estimate: abs_tol,
        });
    }
    Ok(total)
}

fn simpson(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    failed: &mut bool,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 || m <= a || m >= b {
        *failed = true;
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, failed)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, failed)
}

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

fn gk15<const N: usize, F>(f: &F, a: f64, b: f64) -> Segment<N>
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    for i in 0..N {
        kronrod[i] = WGK[7] * fc[i];
        gauss[i] = WG[3] * fc[i];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for i in 0..N {
            let s = f1[i] + f2[i];
            kronrod[i] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * s;
            }
        }
    }
    let mut error: f64 = 0.0;
    for i in 0..N {
        kronrod[i] *= half;
        gauss[i] *= half;
        error = error.max((kronrod[i] - gauss[i]).abs());
    }
    Segment {
        a,
        b,
        value: kronrod,
        error,
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of a vector-valued
/// integrand over the partition given by `knots`.
///
/// Terminates once the summed error estimate is below
/// `tol * max(1, |I|_inf)`.
pub fn gauss_kronrod<const N: usize, F>(f: F, knots: &[f64], tol: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> [f64; N],
{
    let mut segments: Vec<Segment<N>> = knots
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk15(&f, w[0], w[1]))
        .collect();
    if segments.is_empty() {
        return Ok([0.0; N]);
    }
    loop {
        let mut total = [0.0; N];
        let mut error = 0.0;
        for s in &segments {
            for (acc, v) in total.iter_mut().zip(&s.value) {
                *acc += v;
            }
            error += s.error;
        }
        let scale = total.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        if error <= tol * scale {
            return Ok(total);
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (a, b) = (segments[worst].a, segments[worst].b);
        let m = 0.5 * (a + b);
        if segments.len() >= GK_MAX_SEGMENTS || m <= a || m >= b {
            let partial = total.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
            return Err(Error::Quadrature {
                partial,
                error_estimate: error,
            });
        }
        segments[worst] = gk15(&f, a, m);
        segments.push(gk15(&f, m, b));
    }
}

/// Scalar convenience wrapper around [`gauss_kronrod`].
pub fn gauss_kronrod_scalar<F>(f: F, knots: &[f64], tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    gauss_kronrod(|t| [f(t)], knots, tol).map(|v| v[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_handles_kink() {
        let v = adaptive_simpson(|x: f64| x.abs(), &[-1.0, 2.0], 1e-12).unwrap();
        assert!((v - 2.5).abs() < 1e-11);
    }

    #[test]
    fn simpson_zero_integrand() {
        assert_eq!(adaptive_simpson(|_| 0.0, &[0.0, 10.0], 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn kronrod_polynomial_exact() {
        let v = gauss_kronrod_scalar(|x| x.powi(10), &[0.0, 1.0], 1e-14).unwrap();
        assert!((v - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_oscillatory_vector() {
        let v = gauss_kronrod(|x: f64| [(50.0 * x).sin(), (50.0 * x).cos()], &[0.0, PI], 1e-12).unwrap();
        assert!((v[0] - 0.0).abs() < 1e-12);
        assert!((v[1] - 0.0).abs() < 1e-12);
    }

    #[test]
    fn kronrod_reports_partial_on_failure() {
        // a zero tolerance can never be met on a singular integrand
        let err = gauss_kronrod_scalar(|x: f64| 1.0 / x.abs().sqrt().max(1e-300), &[0.0, 1.0], 0.0)
            .unwrap_err();
        match err {
            Error::Quadrature { partial, .. } => assert!((partial - 2.0).abs() < 1e-2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
