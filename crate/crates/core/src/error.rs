use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state vector has (numerically) zero norm")]
    ZeroNorm,

    #[error("non-finite amplitude encountered")]
    NonFinite,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("parameters outside the domain of the closed-form solution: {0}")]
    ParameterDomain(String),

    #[error("the Platen scheme is single-channel, model has {0} channels")]
    MultiChannelUnsupported(usize),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("integration failure: {0}")]
    IntegrationFailure(String),

    #[error("at least two samples are required, have {0}")]
    InsufficientSamples(usize),

    #[error("record grid does not match accumulator grid: {0}")]
    GridMismatch(String),

    #[error("trajectory {trajectory} failed at step {step}: {source}")]
    Trajectory {
        trajectory: u64,
        step: usize,
        source: Box<Error>,
    },

    #[error("{aborted} of {total} trajectories aborted, above the 0.1% limit")]
    AbortRateExceeded { aborted: usize, total: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
