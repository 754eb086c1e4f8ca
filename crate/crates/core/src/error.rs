use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("SDP did not converge after {iterations} iterations (gap {gap:.3e})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("observable is not binary: {0}")]
    NotBinary(String),

    #[error("observable is not a valid order-{d} generalized observable: {detail}")]
    NotGeneralized { d: usize, detail: String },

    #[error("singular operator: {0}")]
    Singular(String),

    #[error("polynomial has two distinct first-round factors: {0}")]
    TwoAliceFactors(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("game file error: {0}")]
    GameFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
