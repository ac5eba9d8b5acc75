use thiserror::Error;

/// Errors produced by the eqcolor library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },

    #[error("line {line}: malformed edge: {reason}")]
    MalformedEdge { line: usize, reason: String },

    #[error("edge {edge}: vertex id {vertex} out of range (m = {m})")]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        m: usize,
    },

    #[error("edge {edge}: expected {expected} vertices, found {found}")]
    WrongArity {
        edge: usize,
        expected: usize,
        found: usize,
    },

    #[error("edge {edge}: vertex {vertex} appears more than once")]
    DuplicateVertex { edge: usize, vertex: usize },

    #[error("header announces {expected} edges but {found} were read")]
    EdgeCountMismatch { expected: usize, found: usize },

    #[error("invalid JSON: {0}")]
    Json(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("coloring is partial: vertex {0} is unassigned")]
    PartialColoring(usize),

    #[error("coloring covers {found} vertices but the hypergraph has {expected}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("{m} vertices are not divisible by {r} colors")]
    NotDivisible { m: usize, r: usize },

    #[error("parameter out of the asymptotic regime: {0}")]
    RegimeViolation(String),

    #[error("vertex {vertex} is not colored {expected}")]
    WrongColor { vertex: usize, expected: u32 },

    #[error("coloring is not proper")]
    NotProper,

    #[error("rebalance infeasible: V_{color} has {available} usable candidates, {needed} needed")]
    RebalanceInfeasible {
        color: usize,
        available: usize,
        needed: usize,
    },

    #[error("chain extraction failed: {0}")]
    Extraction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
