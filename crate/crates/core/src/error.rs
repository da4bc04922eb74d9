use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("problem too large: {what} = {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("operator is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence { iterations: usize, best_residual: f64 },

    #[error("norm drifted to {norm} (tolerance {tolerance:e}); time step too large")]
    NormDrift { norm: f64, tolerance: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("spectral gap {gap:e} below floor {floor:e}{}", at.map(|s| format!(" at s = {s}")).unwrap_or_default())]
    GapClosed { gap: f64, floor: f64, at: Option<f64> },

    #[error("eigensolver failed at s = {s}: {source}")]
    AtParameter {
        s: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate {what} (gap {gap:e})")]
    Degenerate { what: &'static str, gap: f64 },

    #[error("not a stochastic matrix: {0}")]
    NotStochastic(String),

    #[error("detailed balance violated by {violation:e}")]
    DetailedBalance { violation: f64 },

    #[error("kernel is reducible or not primitive")]
    Reducible,

    #[error("kernel has a negative entry {value:e} at ({row}, {col})")]
    NegativeKernel { row: usize, col: usize, value: f64 },

    #[error("distribution is not stationary for the chain (deviation {deviation:e})")]
    NotStationary { deviation: f64 },

    #[error("quantized Hamiltonian does not annihilate the Gibbs state (residual {residual:e})")]
    KernelMismatch { residual: f64 },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("no embedding found after {attempts} attempts (best overlap {best_overlap})")]
    EmbeddingFailed { attempts: usize, best_overlap: usize },

    #[error("no finite repeat count for success probability {0}")]
    NoFiniteRepeats(f64),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
