use thiserror::Error;

/// Errors raised by the kinematics routines.
#[derive(Debug, Error)]
pub enum FoldError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A model parameter lies outside the domain where its crease pattern exists.
    #[error("parameter outside domain: {0}")]
    Domain(String),

    #[error("singular parameters: {0}")]
    Singular(String),

    /// The fold angle vector does not satisfy the loop-closure condition.
    #[error("configuration does not close (residual {residual:.3e})")]
    NotClosed { residual: f64 },

    /// A mapped angle left [-pi, pi]; the drive exceeded its reachable interval.
    #[error("mapped angle {value:.6} outside [-pi, pi]")]
    OutOfRange { value: f64 },

    #[error("ambiguous branch, candidates {candidates:?}")]
    BranchAmbiguity { candidates: Vec<f64> },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// The input point does not lie on any closing branch.
    #[error("inconsistent point: {0}")]
    Inconsistent(String),

    #[error("vertex r{vertex}")]
    Vertex {
        vertex: usize,
        #[source]
        source: Box<FoldError>,
    },

    #[error("empty reachable interval")]
    EmptyInterval,

    #[error("trace diverged: {0}")]
    TraceDiverged(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}

/// Coarse grouping used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    Numerical,
    Io,
}

impl FoldError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            FoldError::InvalidInput(_)
            | FoldError::Domain(_)
            | FoldError::Singular(_)
            | FoldError::OutOfRange { .. } => ErrorKind::Domain,
            FoldError::Io(_) | FoldError::Serialization(_) => ErrorKind::Io,
            FoldError::Vertex { source, .. } => source.kind(),
            _ => ErrorKind::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, FoldError>;
