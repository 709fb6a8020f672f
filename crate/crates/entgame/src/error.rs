//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("combined register of {requested} qubits exceeds the configured cap of {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("matrix entries must be finite")]
    NonFiniteEntries,

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositiveSemidefinite { min_eig: f64 },

    #[error("density matrix trace is {trace:.12} instead of 1")]
    TraceNotOne { trace: f64 },

    #[error("state vector squared norm is {norm_sq:.12} instead of 1")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid qubit index {index} for a register of {num_qubits} qubits")]
    InvalidQubit { index: usize, num_qubits: usize },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("cannot trace out all qubits of a state")]
    TraceAllQubits,

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("parameter slot {slot} is unbound (vector holds {bound} values)")]
    UnboundParameter { slot: usize, bound: usize },

    #[error("parameter '{name}' feeds a gate without the parameter-shift property")]
    ShiftRuleUnsupported { name: String },

    #[error("non-finite gradient for parameter '{name}'; try a smaller learning rate")]
    NonFiniteGradient { name: String },

    #[error("generator violates the cut constraint at gate indices {0:?}")]
    SeparabilityViolation(Vec<usize>),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("channel is not trace preserving (max |sum K^dag K - I| = {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("channels acting on {arity} qubits are not supported (max 2)")]
    UnsupportedChannelArity { arity: usize },

    #[error("noise parameter {0} is outside [0, 1]")]
    InvalidNoiseParam(f64),

    #[error("expectation value {0} is outside [0, 1]; inputs are not a valid POVM/state pair")]
    InvalidExpectation(f64),

    #[error("invalid rank {rank} for a {dim}-dimensional state")]
    InvalidRank { rank: usize, dim: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
}
