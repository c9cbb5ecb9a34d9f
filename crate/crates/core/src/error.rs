use alloc::string::String;

/// Errors produced by the phase-space routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("kernel diverges at south pole")]
    KernelAtInfinity,
    #[error("magnetic quantum number 2m = {twice_m} outside -2j..=2j (2j = {twice_j}) or wrong parity")]
    ProjectionOutOfRange { twice_m: i64, twice_j: u32 },
    #[error("expected {expected} entries, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("state has no nonzero coefficient")]
    ZeroState,
    #[error("non-finite coefficient in state")]
    NonFinite,
    #[error("root count {found} does not match 2j = {expected}")]
    RootCountMismatch { expected: usize, found: usize },
    #[error("Rényi index must be positive, got {0}")]
    InvalidOrder(f64),
    #[error("dual measures are undefined for 2j = 0")]
    DualUndefined,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate barycenter")]
    DegenerateBarycenter,
    #[error("integration did not converge (estimate {estimate:e}, error {error:e})")]
    NonConvergence { estimate: f64, error: f64 },
    #[error("matrix is not hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("eigendecomposition failed")]
    EigenFailure,
    #[error("map iteration stalled at step {step}: W = {moment}, coherent value {target}")]
    Stalled { step: usize, moment: f64, target: f64 },
    #[error("monotonicity violated at step {step}: {before} -> {after}")]
    NotMonotone { step: usize, before: f64, after: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures caused by numerically degenerate input rather than bad arguments.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateBarycenter
                | Error::NonConvergence { .. }
                | Error::EigenFailure
                | Error::Stalled { .. }
                | Error::ZeroState
        )
    }
}
