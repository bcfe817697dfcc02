use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge list parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("matching is not vertex-disjoint at vertex {0}")]
    NotAMatching(usize),

    #[error("rotation pivot {0} is covered by the matching")]
    PivotInMatching(usize),

    #[error("missing edge {{{0}, {1}}}")]
    MissingEdge(usize, usize),

    #[error("invalid rotation: {0}")]
    Rotation(String),

    #[error("instance too large for exhaustive mode: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("argument error: {0}")]
    Argument(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no solution in (0,1) for c = {0} (need c > 1)")]
    Domain(f64),
}
