use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: partial value {partial:e}, error estimate {error_estimate:e}")]
    Quadrature { partial: f64, error_estimate: f64 },

    /// The wavefunction carries non-negligible weight next to the grid edges.
    #[error("boundary contamination: {mass:e} of the norm lies within 5% of the grid edges")]
    Boundary { mass: f64 },

    /// A probability row did not accumulate `1 - tail_tol` before the cutoff.
    #[error("probability row did not converge by m = {max_m} (partial sum {partial_sum})")]
    RowTruncation { max_m: usize, partial_sum: f64 },

    /// Two wavefunctions live on different grids.
    #[error("grid mismatch between wavefunctions")]
    GridMismatch,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of a numerical method, as opposed to invalid input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. } | Error::Boundary { .. } | Error::RowTruncation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
