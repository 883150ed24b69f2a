//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to parse topology document: {0}")]
    TopologyParse(#[source] serde_json::Error),

    #[error("unsupported topology schema_version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("topology has no nodes")]
    EmptyTopology,

    #[error("duplicate node id {0}")]
    DuplicateNodeId(u32),

    #[error("node ids must be contiguous from 1; missing id {0}")]
    NonContiguousIds(u32),

    #[error("link {index} references unknown endpoint {id}")]
    UnknownEndpoint { index: usize, id: u32 },

    #[error("link {index} is a self-loop on node {id}")]
    SelfLoop { index: usize, id: u32 },

    #[error("link {index} ({a}-{b}) has nonpositive distance {distance}")]
    NonpositiveDistance {
        index: usize,
        a: u32,
        b: u32,
        distance: f64,
    },

    #[error("link {index} ({a}-{b}) has zero fiber count")]
    ZeroFiberCount { index: usize, a: u32, b: u32 },

    #[error("topology is disconnected: node {0} is unreachable from node 1")]
    Disconnected(u32),

    #[error("no path between nodes {a} and {b}")]
    Unreachable { a: u32, b: u32 },

    #[error("{0} must be positive")]
    NonpositiveInput(&'static str),

    #[error("{0} must be non-negative")]
    NegativeInput(&'static str),

    #[error("fraction {0} must lie in (0, 1]")]
    FractionOutOfRange(&'static str),

    #[error("inconsistent placement: {0}")]
    InconsistentPlacement(String),

    #[error(
        "wavelength capacity exceeded on link {a}-{b}: {used} wavelengths > {capacity} available"
    )]
    CapacityExceeded { a: u32, b: u32, used: u64, capacity: u64 },

    #[error("baseline power is zero; savings undefined")]
    ZeroBaseline,

    #[error("brute force refused: {combinations} assignment combinations exceed budget {budget}")]
    BudgetExceeded { combinations: u128, budget: u128 },

    #[error("model is infeasible ({0})")]
    Infeasible(String),

    #[error("invalid configuration field `{field}`: {reason}")]
    ConfigField { field: String, reason: String },

    #[error("LP parse error at line {line}: {msg}")]
    LpParse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("failed to serialize output: {0}")]
    Serialize(#[source] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
