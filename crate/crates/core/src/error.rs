use thiserror::Error;

pub type Result<T> = std::result::Result<T, PhaseError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The two branches of the entangled state cancel, so it cannot be normalized.
    #[error("degenerate state: normalization N^2 = {norm_squared:e} is below {threshold:e}")]
    DegenerateState { norm_squared: f64, threshold: f64 },

    /// Initial and final states are (numerically) orthogonal.
    #[error("total phase undefined: |<psi(0)|psi(tau)>| = {magnitude:e} is below {threshold:e}")]
    UndefinedTotalPhase { magnitude: f64, threshold: f64 },

    #[error("truncation error: n_max = {n_max} leaves tail mass {tail:e} >= {tolerance:e}")]
    Truncation { n_max: usize, tail: f64, tolerance: f64 },

    #[error("capacity exceeded: rho = {rho} needs a Fock basis larger than the cap {cap}")]
    Capacity { rho: f64, cap: usize },

    /// Two oracle routes that must agree did not; this indicates a bug.
    #[error("oracle inconsistency: {what} differ by {difference:e} (bound {bound:e})")]
    OracleInconsistency {
        what: &'static str,
        difference: f64,
        bound: f64,
    },
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(PhaseError::InvalidArgument(format!("{name} must be finite, got {value}")))
    }
}
