use thiserror::Error;

/// Errors produced by operator arithmetic, synthesis, evolution and checking.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not Hermitian: ||h - h^dagger||_F = {residual:e} exceeds {limit:e}")]
    NotHermitian { residual: f64, limit: f64 },

    #[error("operator is not unitary: ||u^dagger u - I||_F = {residual:e} exceeds {limit:e}")]
    NotUnitary { residual: f64, limit: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwoDim(usize),

    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("state is not normalized: |psi|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid step count {steps}: {reason}")]
    InvalidSteps { steps: usize, reason: &'static str },

    #[error("invalid gate parameters: {0}")]
    InvalidSpec(String),

    #[error("invalid basis bitstring {0:?}")]
    InvalidBitString(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("malformed JSON at byte {offset}: {message}")]
    Json { offset: usize, message: String },

    #[error("non-finite value {0} cannot be serialized")]
    NonFinite(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
