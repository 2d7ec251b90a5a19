use crate::axis::Domain;

/// Errors raised by filter construction, discretization and analysis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("expected a {expected:?} axis, found {found:?}")]
    Domain { expected: Domain, found: Domain },

    #[error("axis mismatch: {0}")]
    AxisMismatch(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("grid undersampled: step {step:e} exceeds the resolution limit {limit:e}")]
    Resolution { step: f64, limit: f64 },

    #[error("kernel support exceeds the grid: tail mass {tail_mass:e} above 1e-6")]
    Truncation { tail_mass: f64 },

    #[error("representation {rows:?} <- {cols:?} is not available for this filter")]
    UnsupportedRepresentation { rows: Domain, cols: Domain },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("mode index {index} out of range ({len} retained)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("reconstruction residual {residual:e} exceeds the truncation bound {bound:e}")]
    TruncationResidual { residual: f64, bound: f64 },

    #[error("{got} trials supplied, at least {required} required")]
    InsufficientTrials { got: usize, required: usize },

    #[error("numerical failure: {0}")]
    Numeric(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
