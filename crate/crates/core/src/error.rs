use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The monomial form of a polynomial drifted away from its interpolation
    /// data by more than the evaluation tolerance.
    #[error("monomial conversion is ill-conditioned: deviation {deviation:e} at node {node}")]
    Conditioning { node: usize, deviation: f64 },

    /// A tuple of grid indices fails the intersection condition, so no
    /// polynomial passes through the intervals sampled there.
    #[error("tuple {indices:?} admits no polynomial through its intervals (gap {gap:e})")]
    InfeasibleTuple { indices: Vec<usize>, gap: f64 },

    #[error("epsilon {epsilon:e} is below the extrapolation deviation {required:e} attained on tuple {indices:?}")]
    EpsilonTooSmall {
        epsilon: f64,
        required: f64,
        indices: Vec<usize>,
    },

    #[error("solver failure: {0}")]
    Solver(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
