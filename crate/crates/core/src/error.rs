use crate::graph::{EdgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: EdgeId, vertex: VertexId },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} exceeds the enumeration budget of {limit}")]
    BudgetExceeded { what: String, limit: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("not a morphism: edge {edge}: {reason}")]
    NotAMorphism { edge: EdgeId, reason: String },
    #[error("morphism is not harmonic")]
    NotHarmonic,
    #[error("graph is not hyperelliptic")]
    NotHyperelliptic,
    #[error("automorphism set is not a group: {0}")]
    NotAGroup(String),
    #[error("check not applicable: {0}")]
    NotApplicable(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
