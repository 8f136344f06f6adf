use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("structure constant index out of range: ({i},{j},{k}) for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("bracket [e{i},e{i}] has a nonzero e{k} component")]
    NotAntisymmetric { i: usize, k: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("metric is degenerate or not positive definite")]
    DegenerateMetric,
    #[error("fundamental form is degenerate")]
    NondegeneracyFailure,
    #[error("structure is not locally conformally symplectic (residual {0})")]
    NotLcs(String),
    #[error("structure is not of the first kind")]
    NotFirstKind,
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid structure [{code}]: {message}")]
    InvalidStructure { code: String, message: String },
}
