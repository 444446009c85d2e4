use thiserror::Error;

/// Errors raised by the simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid subsystem shape: {0}")]
    InvalidShape(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    InvalidIndex { index: usize, count: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("POVM elements do not sum to identity (deviation {deviation:e})")]
    IncompletePovm { deviation: f64 },

    #[error("measurement outcome is impossible (probability {prob:e})")]
    ImpossibleOutcome { prob: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("states are indistinguishable (overlap {overlap})")]
    Indistinguishable { overlap: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("program does not implement a unitary (Choi rank {rank})")]
    NotUnitaryChannel { rank: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QError>;
