//! CSV record types and writers for trajectories, frames, transition
//! probabilities and wavefunction dumps.

use std::io::Write;

use serde::Serialize;

use crate::canonical::{CanonicalFrame, FrameSample};
use crate::classical::{self, OscillatorParams, PhaseState};
use crate::error::Result;
use crate::forcing::ForcingSpec;
use crate::schrodinger::WaveFunction;

/// `t,x,p,x_nh,p_nh,invariant`; the invariant is `H₀(z − z_nh)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    pub x_nh: f64,
    pub p_nh: f64,
    pub invariant: f64,
}

/// `t,x_nh,xdot_nh,G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameRow {
    pub t: f64,
    pub x_nh: f64,
    pub xdot_nh: f64,
    #[serde(rename = "G")]
    pub g: f64,
}

impl From<FrameSample> for FrameRow {
    fn from(s: FrameSample) -> Self {
        FrameRow {
            t: s.t,
            x_nh: s.x_nh,
            xdot_nh: s.xdot_nh,
            g: s.g,
        }
    }
}

/// Long format `t,n,m,P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionRecord {
    pub t: f64,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "P")]
    pub p: f64,
}

/// `x,re,im,abs2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateRow {
    pub x: f64,
    pub re: f64,
    pub im: f64,
    pub abs2: f64,
}

/// `t,norm,energy,overlap_ground`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolutionLogRow {
    pub t: f64,
    pub norm: f64,
    pub energy: f64,
    pub overlap_ground: f64,
}

/// Evaluates the full and non-homogeneous solutions on `times`.
pub fn trajectory(
    params: &OscillatorParams,
    z0: PhaseState,
    spec: &ForcingSpec,
    times: &[f64],
    tol: f64,
) -> Result<Vec<TrajectoryRow>> {
    times
        .iter()
        .map(|&t| {
            let z = classical::evolve(params, z0, spec, t, tol)?;
            let nh = classical::nonhomogeneous(params, spec, t, tol)?;
            Ok(TrajectoryRow {
                t,
                x: z.x,
                p: z.p,
                x_nh: nh.x,
                p_nh: nh.p,
                invariant: classical::quadratic_invariant(params, z - nh),
            })
        })
        .collect()
}

/// Frame samples at `times` (exact evaluation).
pub fn frame_rows(frame: &CanonicalFrame, times: &[f64]) -> Result<Vec<FrameRow>> {
    times.iter().map(|&t| frame.state(t).map(FrameRow::from)).collect()
}

pub fn state_rows(psi: &WaveFunction) -> Vec<StateRow> {
    psi.grid
        .positions()
        .zip(&psi.values)
        .map(|(x, v)| StateRow {
            x,
            re: v.re,
            im: v.im,
            abs2: v.norm_sqr(),
        })
        .collect()
}

/// Writes `rows` as CSV with a header derived from the record fields.
pub fn write_csv<W: Write, R: Serialize>(writer: W, rows: &[R]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r).map_err(std::io::Error::other)?;
    }
    w.flush()
}

/// `times` equally spaced on `[0, t_max]`.
pub fn time_grid(t_max: f64, samples: usize) -> Vec<f64> {
    if samples < 2 {
        return vec![0.0];
    }
    let step = t_max / (samples - 1) as f64;
    (0..samples)
        .map(|i| if i == samples - 1 { t_max } else { i as f64 * step })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schrodinger::GridSpec;

    fn header(bytes: &[u8]) -> String {
        String::from_utf8(bytes.to_vec()).unwrap().lines().next().unwrap().to_string()
    }

    #[test]
    fn headers() {
        let mut buf = Vec::new();
        let p = OscillatorParams::new(1.0, 1.0).unwrap();
        let rows = trajectory(&p, PhaseState::new(1.0, 0.0), &ForcingSpec::Zero, &[0.0, 1.0], 1e-10).unwrap();
        write_csv(&mut buf, &rows).unwrap();
        assert_eq!(header(&buf), "t,x,p,x_nh,p_nh,invariant");
        assert!(rows.iter().all(|r| r.x_nh == 0.0 && (r.invariant - 0.5).abs() < 1e-15));

        let mut buf = Vec::new();
        write_csv(&mut buf, &[FrameRow { t: 0.0, x_nh: 0.0, xdot_nh: 0.0, g: 0.0 }]).unwrap();
        assert_eq!(header(&buf), "t,x_nh,xdot_nh,G");

        let mut buf = Vec::new();
        write_csv(&mut buf, &[TransitionRecord { t: 0.0, n: 0, m: 1, p: 0.5 }]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,n,m,P\n0.0,0,1,0.5\n");

        let mut buf = Vec::new();
        let psi = WaveFunction::eigenstate(&p, 0, GridSpec::default_for(&p).unwrap()).unwrap();
        write_csv(&mut buf, &state_rows(&psi)).unwrap();
        assert_eq!(header(&buf), "x,re,im,abs2");

        let mut buf = Vec::new();
        write_csv(&mut buf, &[EvolutionLogRow { t: 0.0, norm: 1.0, energy: 0.5, overlap_ground: 1.0 }]).unwrap();
        assert_eq!(header(&buf), "t,norm,energy,overlap_ground");
    }

    #[test]
    fn time_grid_endpoints() {
        let t = time_grid(2.0, 5);
        assert_eq!(t, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }
}
