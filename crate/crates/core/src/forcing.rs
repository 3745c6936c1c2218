//! Time-dependent external force `k(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Default relative tolerance for [`ForcingSpec::abs_integral`].
pub const DEFAULT_ABS_INTEGRAL_TOL: f64 = 1e-10;

/// A position-independent force acting on the oscillator.
///
/// Serialized as an internally tagged JSON object, e.g.
/// `{"type": "sinusoid", "A": 1.0, "Omega": 2.0, "phi": 0.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", try_from = "RawForcing")]
pub enum ForcingSpec {
    Zero,
    Constant {
        #[serde(rename = "K")]
        k: f64,
    },
    /// `A cos(Ω t + φ)`.
    Sinusoid {
        #[serde(rename = "A")]
        amplitude: f64,
        #[serde(rename = "Omega")]
        omega: f64,
        phi: f64,
    },
    /// `K` on `[t_on, t_off)`, zero elsewhere.
    Pulse {
        #[serde(rename = "K")]
        k: f64,
        t_on: f64,
        t_off: f64,
    },
    /// Piecewise-linear through `(t, k)` samples, zero outside their range.
    Tabulated { samples: Vec<(f64, f64)> },
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawForcing {
    Zero,
    Constant {
        #[serde(rename = "K")]
        k: f64,
    },
    Sinusoid {
        #[serde(rename = "A")]
        amplitude: f64,
        #[serde(rename = "Omega")]
        omega: f64,
        #[serde(default)]
        phi: f64,
    },
    Pulse {
        #[serde(rename = "K")]
        k: f64,
        t_on: f64,
        t_off: f64,
    },
    Tabulated {
        samples: Vec<(f64, f64)>,
    },
}

impl TryFrom<RawForcing> for ForcingSpec {
    type Error = Error;

    fn try_from(raw: RawForcing) -> Result<Self> {
        let spec = match raw {
            RawForcing::Zero => ForcingSpec::Zero,
            RawForcing::Constant { k } => ForcingSpec::Constant { k },
            RawForcing::Sinusoid {
                amplitude,
                omega,
                phi,
            } => ForcingSpec::Sinusoid {
                amplitude,
                omega,
                phi,
            },
            RawForcing::Pulse { k, t_on, t_off } => ForcingSpec::Pulse { k, t_on, t_off },
            RawForcing::Tabulated { samples } => ForcingSpec::Tabulated { samples },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl ForcingSpec {
    pub fn constant(k: f64) -> Result<Self> {
        let s = ForcingSpec::Constant { k };
        s.validate().map(|_| s)
    }

    pub fn sinusoid(amplitude: f64, omega: f64, phi: f64) -> Result<Self> {
        let s = ForcingSpec::Sinusoid {
            amplitude,
            omega,
            phi,
        };
        s.validate().map(|_| s)
    }

    pub fn pulse(k: f64, t_on: f64, t_off: f64) -> Result<Self> {
        let s = ForcingSpec::Pulse { k, t_on, t_off };
        s.validate().map(|_| s)
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        let s = ForcingSpec::Tabulated { samples };
        s.validate().map(|_| s)
    }

    /// Checks the structural invariants of the variant.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            ForcingSpec::Zero => Ok(()),
            ForcingSpec::Constant { k } if finite(&[*k]) => Ok(()),
            ForcingSpec::Sinusoid {
                amplitude,
                omega,
                phi,
            } if finite(&[*amplitude, *omega, *phi]) => Ok(()),
            ForcingSpec::Pulse { k, t_on, t_off } if finite(&[*k, *t_on, *t_off]) => {
                if t_on < t_off {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "pulse requires t_on < t_off, got t_on = {t_on}, t_off = {t_off}"
                    )))
                }
            }
            ForcingSpec::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(Error::domain("tabulated forcing needs at least 2 samples"));
                }
                if !samples.iter().all(|(t, k)| t.is_finite() && k.is_finite()) {
                    return Err(Error::domain("tabulated forcing samples must be finite"));
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::domain("tabulated sample times must be strictly increasing"));
                }
                Ok(())
            }
            _ => Err(Error::domain("forcing parameters must be finite")),
        }
    }

    /// `k(t)`; errors on non-finite `t`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::domain(format!("forcing evaluated at non-finite time {t}")));
        }
        Ok(self.value(t))
    }

    pub(crate) fn value(&self, t: f64) -> f64 {
        match self {
            ForcingSpec::Zero => 0.0,
            ForcingSpec::Constant { k } => *k,
            ForcingSpec::Sinusoid {
                amplitude,
                omega,
                phi,
            } => amplitude * (omega * t + phi).cos(),
            ForcingSpec::Pulse { k, t_on, t_off } => {
                if t >= *t_on && t < *t_off {
                    *k
                } else {
                    0.0
                }
            }
            ForcingSpec::Tabulated { samples } => interpolate(samples, t),
        }
    }

    /// Times in the open interval `(a, b)` where `k` is not smooth.
    pub fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let candidates: Vec<f64> = match self {
            ForcingSpec::Pulse { t_on, t_off, .. } => vec![*t_on, *t_off],
            ForcingSpec::Tabulated { samples } => samples.iter().map(|s| s.0).collect(),
            _ => Vec::new(),
        };
        candidates.into_iter().filter(|&t| t > a && t < b).collect()
    }

    /// `a`, `b` and every point in between where `|k|` has a kink, sorted.
    pub(crate) fn abs_knots(&self, a: f64, b: f64) -> Vec<f64> {
        let mut knots = vec![a];
        knots.extend(self.breakpoints(a, b));
        match self {
            ForcingSpec::Sinusoid { omega, phi, .. } if *omega != 0.0 => {
                // zeros of cos(Ω t + φ): Ω t + φ = π/2 + jπ
                let half_pi = std::f64::consts::FRAC_PI_2;
                let pi = std::f64::consts::PI;
                let (lo, hi) = {
                    let x = (omega * a + phi - half_pi) / pi;
                    let y = (omega * b + phi - half_pi) / pi;
                    (x.min(y).ceil() as i64, x.max(y).floor() as i64)
                };
                for j in lo..=hi {
                    let t = (half_pi + j as f64 * pi - phi) / omega;
                    if t > a && t < b {
                        knots.push(t);
                    }
                }
            }
            ForcingSpec::Tabulated { samples } => {
                for w in samples.windows(2) {
                    let ((t0, k0), (t1, k1)) = (w[0], w[1]);
                    if k0 * k1 < 0.0 {
                        let t = t0 + (t1 - t0) * k0 / (k0 - k1);
                        if t > a && t < b {
                            knots.push(t);
                        }
                    }
                }
            }
            _ => {}
        }
        knots.push(b);
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        knots
    }

    /// `∫₀ᵗ |k(s)| ds` by adaptive Simpson quadrature to relative tolerance `tol`.
    ///
    /// A finite value for every finite `t` is the admissibility condition
    /// on the forcing.
    pub fn abs_integral(&self, t: f64, tol: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("abs_integral needs finite t >= 0, got {t}")));
        }
        if !(tol > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let knots = self.abs_knots(0.0, t);
        quadrature::adaptive_simpson(|s| self.value(s).abs(), &knots, tol)
    }
}

fn interpolate(samples: &[(f64, f64)], t: f64) -> f64 {
    let (first, last) = (samples[0], samples[samples.len() - 1]);
    if t < first.0 || t > last.0 {
        return 0.0;
    }
    // index of the first sample with time > t
    let hi = samples.partition_point(|s| s.0 <= t);
    if hi == 0 {
        return first.1;
    }
    let (t0, k0) = samples[hi - 1];
    if t == t0 || hi == samples.len() {
        return k0;
    }
    let (t1, k1) = samples[hi];
    k0 + (k1 - k0) * (t - t0) / (t1 - t0)
}
