use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge {edge} out of range for graph with {m} edges")]
    EdgeOutOfRange { edge: usize, m: usize },

    #[error("edge weight {weight} below 1 on edge {edge}")]
    WeightBelowOne { edge: usize, weight: f64 },

    #[error("negative weight increase {delta} on edge {edge}")]
    NegativeDelta { edge: usize, delta: f64 },

    #[error("graph too large for exhaustive search: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("no cut satisfies the balance requirement")]
    Infeasible,

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
