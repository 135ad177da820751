use thiserror::Error;

/// Errors raised by the exact core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex budget exceeded: {needed} vertices required, cap is {cap}")]
    VertexBudgetExceeded { needed: u128, cap: usize },
    #[error("map has a zero-slope segment on [{0}, {1}]")]
    ZeroSlope(String, String),
    #[error("parameter constraint violated: {0}")]
    Parity(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("partition is not Markov: {0}")]
    NotMarkov(String),
    #[error("iteration cap {cap} reached without covering the circle")]
    IterationCap { cap: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("no feasible stage parameters: {0}")]
    Infeasible(String),
    #[error("monotone-maximum property fails at p = {0}")]
    MonotoneMaxAbsent(String),
    #[error("degenerate annulus configuration: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
