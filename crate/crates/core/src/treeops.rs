//! Junction-tree combinatorics: induced subtrees, permissible-move sets in
//! both the relaxed and strict variants, junction-property verification,
//! observed-tree derivation and rewire candidate sets.
//!
//! All functions are pure over immutable snapshots; per-node evaluation is
//! independent under the relaxed sets and safe to parallelize.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Adjacency, BipartiteState, CliqueId, LatentTree, NodeId};

/// Which permissible-move calculus to use. `Relaxed` allows rows to drift
/// non-maximal (surjective projection); `Strict` additionally requires
/// every move to keep the touched row maximal (bidirectional-injective
/// projection).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    Relaxed,
    Strict,
}

/// The subtree of the latent tree induced by one node's memberships.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubtree {
    pub node: NodeId,
    pub vertices: BTreeSet<CliqueId>,
    pub edges: BTreeSet<(CliqueId, CliqueId)>,
}

impl InducedSubtree {
    pub fn degree_in(&self, k: CliqueId) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == k || *b == k)
            .count()
    }

    /// True iff the membership set spans one connected piece of the tree.
    pub fn is_connected(&self) -> bool {
        connected_components(&self.vertices, &self.edges).len() <= 1
    }
}

fn connected_components(
    vertices: &BTreeSet<CliqueId>,
    edges: &BTreeSet<(CliqueId, CliqueId)>,
) -> Vec<BTreeSet<CliqueId>> {
    let mut remaining: BTreeSet<CliqueId> = vertices.clone();
    let mut components = Vec::new();
    while let Some(&start) = remaining.iter().next() {
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        comp.insert(start);
        remaining.remove(&start);
        while let Some(v) = stack.pop() {
            for &(a, b) in edges.iter() {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if remaining.remove(&w) {
                    comp.insert(w);
                    stack.push(w);
                }
            }
        }
        components.push(comp);
    }
    components
}

/// Boundary and neighbour clique-node sets for one node, the permissible
/// disconnect/connect targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSets {
    pub boundary: BTreeSet<CliqueId>,
    pub neighbour: BTreeSet<CliqueId>,
    pub strictness: Strictness,
}

fn check_spanning(z: &BipartiteState, t: &LatentTree) -> Result<()> {
    for k in z.cliques() {
        if !t.contains(k) {
            return Err(Error::TreeSpansMismatch(k));
        }
    }
    Ok(())
}

/// The subtree of `t` induced by the cliques containing node `i`.
pub fn induced_subtree(z: &BipartiteState, t: &LatentTree, i: NodeId) -> Result<InducedSubtree> {
    if !z.contains_node(i) {
        return Err(Error::UnknownNode(i));
    }
    check_spanning(z, t)?;
    let vertices = z.memberships(i).clone();
    let mut edges = BTreeSet::new();
    for &k in &vertices {
        for &s in t.neighbors_of(k)? {
            if s > k && vertices.contains(&s) {
                edges.insert((k, s));
            }
        }
    }
    Ok(InducedSubtree {
        node: i,
        vertices,
        edges,
    })
}

/// Relaxed move sets: boundary members have degree <= 1 inside the induced
/// subtree (a singleton subtree contributes itself, so a node's last
/// membership stays disconnectable); neighbours are tree-adjacent to the
/// subtree without containing the node.
pub fn move_sets_relaxed(z: &BipartiteState, t: &LatentTree, i: NodeId) -> Result<MoveSets> {
    let sub = induced_subtree(z, t, i)?;
    let mut boundary = BTreeSet::new();
    let mut neighbour = BTreeSet::new();
    for &k in &sub.vertices {
        if sub.degree_in(k) <= 1 {
            boundary.insert(k);
        }
        for &s in t.neighbors_of(k)? {
            if !sub.vertices.contains(&s) {
                neighbour.insert(s);
            }
        }
    }
    Ok(MoveSets {
        boundary,
        neighbour,
        strictness: Strictness::Relaxed,
    })
}

/// True iff the members of `k`, adjusted by `with` / `without`, are
/// contained in some other clique's row. Containment is tested against
/// every clique-node of the universe, active or not.
fn dominated_after(
    z: &BipartiteState,
    universe: &LatentTree,
    k: CliqueId,
    i: NodeId,
    add: bool,
) -> bool {
    let row = z.members(k);
    let adjusted: BTreeSet<NodeId> = if add {
        let mut r = row.clone();
        r.insert(i);
        r
    } else {
        let mut r = row.clone();
        r.remove(&i);
        r
    };
    universe
        .vertices()
        .filter(|&s| s != k)
        .any(|s| adjusted.is_subset(z.members(s)))
}

/// Strict move sets: the relaxed sets filtered so a disconnect leaves the
/// clique's row uncontained in every other row, and a connect leaves the
/// grown row uncontained likewise.
pub fn move_sets_strict(z: &BipartiteState, t: &LatentTree, i: NodeId) -> Result<MoveSets> {
    let relaxed = move_sets_relaxed(z, t, i)?;
    let boundary = relaxed
        .boundary
        .into_iter()
        .filter(|&k| !dominated_after(z, t, k, i, false))
        .collect();
    let neighbour = relaxed
        .neighbour
        .into_iter()
        .filter(|&k| !dominated_after(z, t, k, i, true))
        .collect();
    Ok(MoveSets {
        boundary,
        neighbour,
        strictness: Strictness::Strict,
    })
}

pub fn move_sets(
    z: &BipartiteState,
    t: &LatentTree,
    i: NodeId,
    strictness: Strictness,
) -> Result<MoveSets> {
    match strictness {
        Strictness::Relaxed => move_sets_relaxed(z, t, i),
        Strictness::Strict => move_sets_strict(z, t, i),
    }
}

/// First junction-property violation found, with the two disconnected
/// membership components as witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JunctionViolation {
    pub node: NodeId,
    pub component_a: BTreeSet<CliqueId>,
    pub component_b: BTreeSet<CliqueId>,
}

/// Checks that every node's memberships induce a connected subtree of `t`.
pub fn verify_junction_property(
    z: &BipartiteState,
    t: &LatentTree,
) -> Result<Option<JunctionViolation>> {
    check_spanning(z, t)?;
    for i in z.nodes() {
        let sub = induced_subtree(z, t, i)?;
        let comps = connected_components(&sub.vertices, &sub.edges);
        if comps.len() > 1 {
            return Ok(Some(JunctionViolation {
                node: i,
                component_a: comps[0].clone(),
                component_b: comps[1].clone(),
            }));
        }
    }
    Ok(None)
}

fn junction_holds(z: &BipartiteState, t: &LatentTree) -> Result<()> {
    match verify_junction_property(z, t)? {
        None => Ok(()),
        Some(w) => Err(Error::JunctionViolated(w.node)),
    }
}

/// Row ids that survive observation: nonempty, not strictly contained in
/// another row, and the smallest id among duplicates.
fn maximal_rows(z: &BipartiteState) -> BTreeSet<CliqueId> {
    let mut survivors = BTreeSet::new();
    'outer: for k in z.cliques() {
        let row = z.members(k);
        if row.is_empty() {
            continue;
        }
        for s in z.cliques() {
            if s == k {
                continue;
            }
            let other = z.members(s);
            if row.is_subset(other) && (row != other || s < k) {
                continue 'outer;
            }
        }
        survivors.insert(k);
    }
    survivors
}

/// Derives the observed junction tree over maximal clique-nodes by
/// rewiring every empty or non-maximal clique-node into a containing
/// neighbour (smallest id first on ties) until only maximal rows remain.
pub fn derive_observed_jtree(z: &BipartiteState, t: &LatentTree) -> Result<LatentTree> {
    Ok(contract_to_maximal(z, t)?.0)
}

/// Contraction with the separator bookkeeping kept: returns the observed
/// tree and the multiset of nonempty edge intersections.
pub(crate) fn contract_to_maximal(
    z: &BipartiteState,
    t: &LatentTree,
) -> Result<(LatentTree, Vec<BTreeSet<NodeId>>)> {
    junction_holds(z, t)?;
    let survivors = maximal_rows(z);
    let mut adj: std::collections::BTreeMap<CliqueId, BTreeSet<CliqueId>> = t
        .vertices()
        .map(|v| (v, t.neighbors_of(v).unwrap().clone()))
        .collect();

    loop {
        let mut contracted = false;
        let doomed: Vec<CliqueId> = adj
            .keys()
            .copied()
            .filter(|k| !survivors.contains(k))
            .collect();
        for s in doomed {
            let row = z.members(s);
            // Pick the contraction target among current neighbours: a
            // containing survivor if available, else any containing
            // neighbour, else (for empty rows) any neighbour at all.
            let nbrs = adj[&s].clone();
            let target = nbrs
                .iter()
                .copied()
                .filter(|&m| survivors.contains(&m) && row.is_subset(z.members(m)))
                .min()
                .or_else(|| {
                    nbrs.iter()
                        .copied()
                        .filter(|&m| row.is_subset(z.members(m)))
                        .min()
                })
                .or_else(|| {
                    if row.is_empty() {
                        nbrs.iter().copied().min()
                    } else {
                        None
                    }
                });
            let Some(m) = target else { continue };
            // Rewire s's other edges to m, then drop s.
            for &x in &nbrs {
                if x == m {
                    continue;
                }
                adj.get_mut(&x).unwrap().remove(&s);
                if x != m {
                    adj.get_mut(&x).unwrap().insert(m);
                    adj.get_mut(&m).unwrap().insert(x);
                }
            }
            adj.get_mut(&m).unwrap().remove(&s);
            adj.remove(&s);
            contracted = true;
        }
        if !contracted {
            break;
        }
    }

    // A lone non-survivor with no contraction target can only be an
    // isolated empty vertex; drop those.
    adj.retain(|k, nbrs| survivors.contains(k) || !nbrs.is_empty());
    if adj.keys().any(|k| !survivors.contains(k)) {
        return Err(Error::NotATree(
            "contraction left a non-maximal vertex".into(),
        ));
    }

    let mut edges = Vec::new();
    let mut separators = Vec::new();
    for (&a, nbrs) in &adj {
        for &b in nbrs {
            if a < b {
                edges.push((a, b));
                let sep: BTreeSet<NodeId> =
                    z.members(a).intersection(z.members(b)).copied().collect();
                if !sep.is_empty() {
                    separators.push(sep);
                }
            }
        }
    }
    separators.sort();
    let tree = LatentTree::new(adj.keys().copied(), edges)?;
    Ok((tree, separators))
}

/// Candidate reconnection targets when edge `(k, s)` is severed at the `s`
/// side: clique-nodes on the `s`-side component whose row contains the
/// separator `members(k) & members(s)`. `s` itself always qualifies.
pub fn rewire_candidates(
    z: &BipartiteState,
    t: &LatentTree,
    edge: (CliqueId, CliqueId),
) -> Result<BTreeSet<CliqueId>> {
    let (k, s) = edge;
    if !t.has_edge(k, s) {
        return Err(Error::EdgeNotInTree(k, s));
    }
    let separator: BTreeSet<NodeId> = z.members(k).intersection(z.members(s)).copied().collect();
    let s_side = t.reachable_from(s, Some((k, s)));
    Ok(s_side
        .into_iter()
        .filter(|&m| separator.is_subset(z.members(m)))
        .collect())
}
