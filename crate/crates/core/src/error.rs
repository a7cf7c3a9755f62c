use thiserror::Error;

use crate::model::{CliqueId, NodeId};

/// Errors across the crate. Domain errors mark violated operation
/// preconditions; divergence is reported explicitly rather than as
/// a silent infinity.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("unknown clique id {0}")]
    UnknownClique(CliqueId),
    #[error("id collision on node {0}")]
    IdCollision(NodeId),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("edge ({0}, {1}) not in tree")]
    EdgeNotInTree(CliqueId, CliqueId),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("self-loop or duplicate edge on {0}")]
    NotSimple(String),
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("junction property violated at node {0}")]
    JunctionViolated(NodeId),
    #[error("tree does not span bipartite clique ids (missing {0})")]
    TreeSpansMismatch(CliqueId),
    #[error("graph is not chordal")]
    NotChordal,
    #[error("input too large for brute force: {0} vertices (cap {1})")]
    BruteForceCap(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
