use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Operator capability required by a call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capability {
    Forward,
    Resolvent,
    Lipschitz,
}

impl std::fmt::Display for Capability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Capability::Forward => "forward evaluation",
            Capability::Resolvent => "resolvent",
            Capability::Lipschitz => "Lipschitz constant",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator `{operator}` has no {capability}")]
    MissingCapability {
        operator: String,
        capability: Capability,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid box: lower bound exceeds upper bound at index {index}")]
    InvalidBox { index: usize },

    #[error("matrix is not monotone: symmetric part has eigenvalue {min_eigenvalue:e}")]
    NotMonotone { min_eigenvalue: f64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("power iteration did not converge after {iterations} iterations (last estimate {estimate})")]
    NoConvergence { iterations: usize, estimate: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("method frdr requires a second stepsize gamma")]
    MissingGamma,

    #[error("no ground truth available: problem has neither x_star nor z_star")]
    UnavailableGroundTruth,

    #[error("inner resolvent solve stalled at t = {time}: residual {residual:e} after {iterations} iterations")]
    InnerSolver {
        time: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("alignment mismatch: {0}")]
    Alignment(String),

    #[error("malformed instance file: {0}")]
    InstanceFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
