use thiserror::Error;

/// Errors raised by the analysis and sampling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size too small: {0}")]
    SizeTooSmall(String),
    #[error("invalid probability {0}")]
    InvalidProbability(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("edge ({0}, {1}) references a vertex outside the graph")]
    InvalidEdge(usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("negative entry {value} at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}, expected 1")]
    RowSumInvalid { row: usize, sum: f64 },
    #[error("probability vector sums to {0}, expected 1")]
    InvalidDistribution(f64),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("vertex {0} carries a loop; simple random walks need a loopless graph")]
    LoopUnsupported(usize),
    #[error("boundary set is empty")]
    EmptyBoundary,
    #[error("boundary set covers every state")]
    BoundaryIsEverything,
    #[error("state {state}: p + q + r = {sum}, expected 1")]
    ProbabilitySumInvalid { state: usize, sum: f64 },
    #[error("birth-death chain leaks out of its state space (q_0 or p_n nonzero)")]
    BoundaryLeak,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chain is not irreducible")]
    NotIrreducible,
    #[error("state {state} out of range for {n} states")]
    StateOutOfRange { state: usize, n: usize },
    #[error("start {k} outside 0..={n}")]
    StartOutOfRange { k: usize, n: usize },
    #[error("stationary weight of state {0} is not strictly positive")]
    NonPositivePi(usize),
    #[error("distribution is not stationary (max residual {0:e})")]
    NotStationary(f64),
    #[error("detail balance fails at ({x}, {y}) by {violation:e}")]
    NotReversible { x: usize, y: usize, violation: f64 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("boundary unreachable from state {0}")]
    BoundaryUnreachable(usize),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("spectral gap is zero")]
    DegenerateGap,
    #[error("target/(M * base) ratio {ratio} exceeds one at {at}")]
    RatioExceedsOne { at: String, ratio: f64 },
    #[error("no proposal accepted within {0} attempts")]
    MaxProposalsExceeded(u64),
    #[error("thinning must be at least 1")]
    InvalidThinning,
    #[error("state space of size {0} is too large")]
    StateSpaceTooLarge(usize),
    #[error("eigenvalue is zero")]
    ZeroEigenvalue,
    #[error("simulation exceeded {0} steps without stopping")]
    StepCapExceeded(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
