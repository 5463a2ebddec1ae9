use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid user-supplied parameters (parity, ranges, sizes).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A random generator could not produce an acceptable object.
    #[error("generation failed: {0}")]
    Generation(String),

    /// Node ids outside `0..n`.
    #[error("node {node} is not part of a graph with {n} nodes")]
    ForeignNode { node: usize, n: usize },

    #[error("operation requires a non-empty node set")]
    EmptySet,

    #[error("graph is not regular")]
    Irregular,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// Degenerate target spectrum where a strict gap is required.
    #[error("degenerate ground: {0}")]
    DegenerateGround(String),

    /// Second-order energy denominators vanish.
    #[error("perturbative divergence: state {state} is degenerate with neighbor {neighbor}")]
    Divergence { state: usize, neighbor: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residuals {residuals:?})")]
    NoConvergence {
        iterations: usize,
        residuals: Vec<f64>,
    },

    /// A structural check failed (non-equitable partition, energy spread, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}
