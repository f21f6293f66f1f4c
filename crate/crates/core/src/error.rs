use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("node {0} has no coordinates")]
    MissingCoordinates(NodeId),
    #[error("embedding fails Euler's formula: {0}")]
    EulerCheckFailed(String),
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("graph cannot be compressed: {0}")]
    DegenerateGraph(String),
    #[error("parallel edges {0} and {1} have equal parity")]
    SameParityParallel(usize, usize),
    #[error("edge list is not a cycle of the compressed graph")]
    NotACycle,
    #[error("instance has {size} nodes, limit is {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("graph contains no even cycle")]
    NoEvenCycle,
    #[error("pseudo-pocket without an even cycle on nodes {0:?}")]
    PseudoPocketWithoutEvenCycle(Vec<NodeId>),
    #[error("faces {0} and {1} share a boundary that is not a single path")]
    SharedBoundaryNotPath(usize, usize),
    #[error("tiling certificate {0} is below 2/3")]
    QuasiPerfectViolation(String),
    #[error("dominant handle of elementary cycle {0} lost its dominance")]
    DesignationFlip(String),
    #[error("no node has a positive dual rate")]
    ZeroRateDeadlock,
    #[error("iteration limit {0} exceeded")]
    NonTermination(usize),
    #[error("input set is not a feasible even cycle transversal")]
    InfeasibleInput,
    #[error("pentagon count {0} must be even and at least 2")]
    OddK(usize),
    #[error("generator parameter out of range: {0}")]
    BadParameter(String),
    #[error("post-condition failed: {0}")]
    Assertion(String),
}
