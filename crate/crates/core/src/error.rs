use thiserror::Error;

/// Errors produced by network construction, index evaluation and the axiom checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate edge {u} -- {v} at line {line}")]
    DuplicateEdge { u: String, v: String, line: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(String),

    #[error("edge weight must be positive and finite, got {weight} on {u} -- {v}")]
    InvalidWeight { u: String, v: String, weight: f64 },

    #[error("distance matrix is not square: {0}")]
    NotSquare(String),

    #[error("network has no nodes")]
    Empty,

    #[error("duplicate node label {0}")]
    DuplicateLabel(String),

    #[error("non-finite distance at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("graph is disconnected: no path between {0} and {1}")]
    Disconnected(String, String),

    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("node indices must be distinct and below {n}")]
    InvalidNodes { n: usize },

    #[error("edit would give a negative distance ({0})")]
    NegativeDistance(f64),

    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),

    #[error("{operation} needs at least {needed} nodes, network has {got}")]
    TooFewNodes {
        operation: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("node {0} has zero distance sum")]
    ZeroDistanceSum(usize),

    #[error("zero off-diagonal distance between nodes {0} and {1}")]
    ZeroDistance(usize, usize),

    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),

    #[error("linear system is singular or nearly so at alpha = {alpha}")]
    Singular { alpha: f64 },

    #[error("Jacobi eigenvalue iteration did not converge in {0} sweeps")]
    EigenNoConvergence(usize),

    #[error("invalid alpha grid: {0}")]
    InvalidGrid(String),

    #[error("trial count must be at least 1")]
    ZeroTrials,

    #[error("only {found} valid perturbations found, {needed} required")]
    InsufficientPerturbations { found: usize, needed: usize },

    #[error("series may diverge: alpha * spectral radius = {0} >= 0.9")]
    SeriesDiverges(f64),

    #[error("unknown fixture {0}")]
    UnknownFixture(String),

    #[error("unknown node label {0}")]
    UnknownLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
