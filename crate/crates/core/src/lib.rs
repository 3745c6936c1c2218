//! Forced harmonic oscillator, classical and quantum.
//!
//! The forcing `k(t)` is removed by moving to a frame that follows the
//! classical response `z_nh(t)`. This crate builds that frame, represents it
//! as a unitary shift-and-phase on wavefunctions, and evaluates closed-form
//! transition probabilities between oscillator eigenstates. Every closed form
//! has an independent numerical counterpart in [`oracle`], [`hermite`] or
//! [`schrodinger`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod classical;
pub mod error;
pub mod export;
pub mod forcing;
pub mod hermite;
pub mod oracle;
pub mod quadrature;
pub mod schrodinger;
pub mod transitions;

pub use canonical::{build_frame, CanonicalFrame, FrameSample};
pub use classical::{OscillatorParams, PhaseState, PropagatorMatrix};
pub use error::{Error, Result};
pub use forcing::ForcingSpec;
pub use hermite::EigenstateParams;
pub use num_complex::Complex64;
pub use schrodinger::{GridSpec, WaveFunction};
pub use transitions::{DisplacementParams, TransitionRow};
