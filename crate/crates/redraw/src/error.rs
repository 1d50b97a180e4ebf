//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by validation, simulation, reconstruction and I/O.
///
/// Node indices in messages are 1-based, matching file formats and DOT
/// output.
#[derive(Debug, Error)]
pub enum Error {
    #[error("network must have at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("self-loop at node {node}: a[{node}][{node}] = {weight}")]
    SelfLoop { node: usize, weight: f64 },

    #[error("negative weight at ({i},{j}): a[{i}][{j}] = {weight}")]
    NegativeWeight { i: usize, j: usize, weight: f64 },

    #[error("non-finite weight at ({i},{j})")]
    NonFiniteWeight { i: usize, j: usize },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("invalid reconstruction params: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("integration diverged: non-finite state at t = {time} (node {node})")]
    Diverged { time: f64, node: usize },

    #[error("experiment {index} is not phase-locked (c_v = {cv:.4} > chi = {chi:.4})")]
    Unlocked { index: usize, cv: f64, chi: f64 },

    #[error("window [{start}, {end}] contains fewer than 2 samples")]
    WindowTooShort { start: f64, end: f64 },

    #[error("edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    #[error("malformed {what}: {reason}")]
    Parse { what: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
