use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point is not strictly interior: constraint {index} has slack {slack:e}")]
    NotInterior { index: usize, slack: f64 },

    #[error("halfspace system is unbounded (recession direction {direction:?})")]
    Unbounded { direction: Vec<f64> },

    #[error("halfspace system is infeasible")]
    Infeasible,

    #[error("points span only {rank} of {dim} dimensions")]
    DimensionDeficient { rank: usize, dim: usize },

    #[error("direction vector is zero")]
    ZeroDirection,

    #[error("moment order {0} is not supported (max 3)")]
    OrderUnsupported(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("interior sampling failed: acceptance rate {rate:e} after {tries} tries")]
    SamplingFailure { rate: f64, tries: usize },

    #[error("support [a, b] is degenerate (b - a = {0:e})")]
    DegenerateSupport(f64),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("distribution has zero variance")]
    ZeroVariance,

    #[error("density is not non-increasing on its support")]
    NotNonIncreasing,

    #[error("chain mismatch at {step}: {detail}")]
    ChainMismatch { step: String, detail: String },

    #[error("nonnegativity certificate failed for {0}")]
    CertificateFailure(String),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("expression parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("iteration budget of {0} exhausted")]
    MaxIterations(usize),

    #[error("Hessian is not positive definite")]
    NotPositiveDefinite,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
