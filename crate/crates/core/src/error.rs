use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("duplicate edge ({from}, {to})")]
    DuplicateEdge { from: usize, to: usize },

    #[error("cost slice has length {got}, expected {expected}")]
    CostLength { got: usize, expected: usize },

    #[error("{0}")]
    InvalidCost(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance too large for exact oracle: {what} = {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("conflicting costs for repeated candidate {edge}")]
    ConflictingCost { edge: String },

    #[error("costs cannot be represented exactly in 64-bit fixed point")]
    CostOverflow,

    #[error(transparent)]
    Format(#[from] crate::format::FormatError),
}
