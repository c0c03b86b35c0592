use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state set is empty")]
    EmptySet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix contains a non-finite entry")]
    NonFiniteEntry,
    #[error("input states are linearly dependent")]
    LinearlyDependentInput,
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("vector norm is below the null threshold")]
    NullVector,
    #[error("superposition vanishes for these inputs")]
    NullSuperposition,
    #[error("state dimension must be at least {min}, got {found}")]
    InvalidDimension { min: usize, found: usize },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("measurement was not built from these hypotheses")]
    MeasurementMismatch,
    #[error("expected a set of {expected} states, found {found}")]
    WrongSetSize { expected: usize, found: usize },
    #[error("superposed outputs are linearly dependent (phases lie on the degeneracy locus)")]
    DependentOutputs,
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
