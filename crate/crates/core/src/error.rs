use thiserror::Error;

/// Errors produced by the measurement and inference routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument fell outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// An object could not be assembled from the supplied parts.
    #[error("construction error: {0}")]
    Construction(String),

    /// A state or value vector did not match the space it was used with.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Two objects that must share a state space do not.
    #[error("state space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("state outside its space: {0}")]
    OutOfSpace(String),

    /// The observable has no sampler.
    #[error("unsupported sampling: {0}")]
    UnsupportedSampling(String),

    /// The observable cannot evaluate the requested quantity in closed form.
    #[error("unsupported evaluation: {0}")]
    Unsupported(String),

    #[error("invalid tree: {0}")]
    Tree(String),

    #[error("no path from node {from} to node {to}")]
    Path { from: usize, to: usize },

    #[error("structure error: {0}")]
    Structure(String),

    /// Design matrix is rank deficient; `column` indexes the augmented matrix
    /// (0 is the intercept).
    #[error("singular design: column {column} is linearly dependent on earlier columns")]
    SingularDesign { column: usize },

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("no maximizer: log-density is -inf at every start")]
    NoMaximizer,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
