use thiserror::Error;

/// Errors surfaced by the simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("output intensity is numerically zero; correlation undefined")]
    UndefinedCorrelation,

    #[error("linear solve hit a singular pivot at column {column}")]
    SingularMatrix { column: usize },

    #[error("steady-state solve failed ({reason}); residual={residual:.3e}, trace error={trace_error:.3e}")]
    SolverFailure {
        reason: String,
        residual: f64,
        trace_error: f64,
    },

    #[error("propagator construction failed: {0}")]
    IntegrationFailure(String),

    #[error("finite-difference step {step:.3e} underflows around measurand {measurand:.3e}")]
    InvalidStep { step: f64, measurand: f64 },
}

pub type Result<V> = std::result::Result<V, Error>;
