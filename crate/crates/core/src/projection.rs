//! The `Z -> G` projection and the maximality repair machinery: A0
//! detection, identity augmentation and edge-greedy completion.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{BipartiteState, CliqueId, DecomposableGraph, LatentTree, NodeId};
use crate::treeops;

/// Monotone source of fresh node ids for repair nodes.
#[derive(Debug, Clone, Copy)]
pub struct IdSource {
    next: u32,
}

impl IdSource {
    pub fn starting_at(next: u32) -> Self {
        Self { next }
    }

    /// Starts right past the largest node id known to `z`.
    pub fn after(z: &BipartiteState) -> Self {
        let next = z.nodes().map(|i| i.0 + 1).max().unwrap_or(0);
        Self { next }
    }

    pub fn fresh(&mut self) -> NodeId {
        let id = NodeId(self.next);
        self.next += 1;
        id
    }
}

/// Result of a repaired projection.
#[derive(Debug, Clone)]
pub struct ProjectionReport {
    pub graph: DecomposableGraph,
    /// A0 violations found before repair.
    pub a0_set: BTreeSet<CliqueId>,
    /// Fresh nodes appended by the repair, with the clique each indexes.
    /// They carry no observation weight; likelihood code excludes them.
    pub added_nodes: Vec<(NodeId, CliqueId)>,
}

/// Projects the bipartite state onto a node-node graph: two nodes are
/// adjacent iff they share a clique row. Vertices are the active nodes.
pub fn project(z: &BipartiteState) -> DecomposableGraph {
    let (active_nodes, _) = z.vertex_partition();
    let mut edges = BTreeSet::new();
    for k in z.cliques() {
        let row: Vec<NodeId> = z.members(k).iter().copied().collect();
        for (ix, &a) in row.iter().enumerate() {
            for &b in &row[ix + 1..] {
                edges.insert((a, b));
            }
        }
    }
    DecomposableGraph::new(active_nodes, edges).expect("projection is simple by construction")
}

fn row_bitsets(z: &BipartiteState) -> (Vec<CliqueId>, Vec<Vec<u64>>) {
    let node_index: BTreeMap<NodeId, usize> =
        z.nodes().enumerate().map(|(ix, i)| (i, ix)).collect();
    let words = node_index.len().div_ceil(64);
    let cliques: Vec<CliqueId> = z.cliques().collect();
    let rows = cliques
        .iter()
        .map(|&k| {
            let mut bits = vec![0u64; words];
            for i in z.members(k) {
                let ix = node_index[i];
                bits[ix / 64] |= 1 << (ix % 64);
            }
            bits
        })
        .collect();
    (cliques, rows)
}

fn is_subset_bits(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Active cliques whose member set is contained in another clique's member
/// set (the container need not be active; equal rows violate mutually).
pub fn a0_violations(z: &BipartiteState) -> BTreeSet<CliqueId> {
    let (cliques, rows) = row_bitsets(z);
    let mut out = BTreeSet::new();
    for (ix, &k) in cliques.iter().enumerate() {
        if z.members(k).is_empty() {
            continue;
        }
        for (jx, &s) in cliques.iter().enumerate() {
            if s != k && is_subset_bits(&rows[ix], &rows[jx]) {
                out.insert(k);
                break;
            }
        }
    }
    out
}

/// Augments every nonempty row with one fresh node connected only to it,
/// so every pre-existing nonempty row becomes maximal.
pub fn augment_identity(z: &BipartiteState, ids: &mut IdSource) -> Result<BipartiteState> {
    let mut out = z.clone();
    let (_, active) = z.vertex_partition();
    for k in active {
        let fresh = ids.fresh();
        if out.contains_node(fresh) {
            return Err(Error::IdCollision(fresh));
        }
        out.connect(k, fresh)?;
    }
    Ok(out)
}

/// Appends fresh single-membership nodes, one per remaining A0 violation in
/// ascending clique order, until the A0 set is empty. Minimal: clean rows
/// never receive a repair node.
pub fn edge_greedy_complete(
    z: &BipartiteState,
    t: &LatentTree,
    ids: &mut IdSource,
) -> Result<(BipartiteState, ProjectionReport)> {
    if let Some(w) = treeops::verify_junction_property(z, t)? {
        return Err(Error::JunctionViolated(w.node));
    }
    let initial = a0_violations(z);
    let mut out = z.clone();
    let mut added = Vec::new();
    loop {
        let violations = a0_violations(&out);
        let Some(&k) = violations.iter().next() else {
            break;
        };
        let fresh = ids.fresh();
        if out.contains_node(fresh) {
            return Err(Error::IdCollision(fresh));
        }
        out.connect(k, fresh)?;
        added.push((fresh, k));
    }
    let report = ProjectionReport {
        graph: project(&out),
        a0_set: initial,
        added_nodes: added,
    };
    Ok((out, report))
}
