//! Independent brute-force ground truth: chordality (maximum cardinality
//! search and chordless-cycle enumeration), maximal cliques, junction-tree
//! construction and RIP verification.
//!
//! These deliberately use different algorithmic families than the main
//! sampling path (enumeration versus incremental maintenance) so they can
//! serve as oracles for it.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{Adjacency, CliqueId, DecomposableGraph, LatentTree, NodeId};

pub const BRUTE_FORCE_CAP: usize = 12;

/// A vertex ordering; perfect iff each vertex's later neighbours form a
/// clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrdering {
    pub ordering: Vec<NodeId>,
}

impl EliminationOrdering {
    /// Checks perfection directly from the definition.
    pub fn is_perfect(&self, g: &DecomposableGraph) -> bool {
        let position: BTreeMap<NodeId, usize> = self
            .ordering
            .iter()
            .enumerate()
            .map(|(ix, &v)| (v, ix))
            .collect();
        for (ix, &v) in self.ordering.iter().enumerate() {
            let Ok(nbrs) = g.neighbors_of(v) else {
                return false;
            };
            let later: BTreeSet<NodeId> = nbrs
                .iter()
                .copied()
                .filter(|w| position.get(w).is_some_and(|&p| p > ix))
                .collect();
            if !g.is_complete(&later) {
                return false;
            }
        }
        true
    }
}

/// Maximum cardinality search chordality test. Returns the verdict and a
/// perfect elimination ordering when the graph is chordal.
pub fn is_chordal_mcs(g: &DecomposableGraph) -> (bool, Option<EliminationOrdering>) {
    let vertices: Vec<NodeId> = g.vertices().collect();
    let n = vertices.len();
    if n == 0 {
        return (true, Some(EliminationOrdering { ordering: vec![] }));
    }
    let index: BTreeMap<NodeId, usize> = vertices
        .iter()
        .enumerate()
        .map(|(ix, &v)| (v, ix))
        .collect();
    let mut weight = vec![0usize; n];
    let mut numbered = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let pick = (0..n)
            .filter(|&ix| !numbered[ix])
            .max_by_key(|&ix| (weight[ix], std::cmp::Reverse(vertices[ix])))
            .unwrap();
        numbered[pick] = true;
        order.push(vertices[pick]);
        for &w in g.neighbors_of(vertices[pick]).unwrap() {
            let wix = index[&w];
            if !numbered[wix] {
                weight[wix] += 1;
            }
        }
    }
    // Tarjan-Yannakakis check: earlier neighbours minus the latest of them
    // must all be adjacent to that latest one.
    let position: BTreeMap<NodeId, usize> =
        order.iter().enumerate().map(|(ix, &v)| (v, ix)).collect();
    for (ix, &v) in order.iter().enumerate() {
        let earlier: Vec<NodeId> = g
            .neighbors_of(v)
            .unwrap()
            .iter()
            .copied()
            .filter(|w| position[w] < ix)
            .collect();
        let Some(&parent) = earlier.iter().max_by_key(|w| position[w]) else {
            continue;
        };
        for &w in &earlier {
            if w != parent && !g.has_edge(w, parent) {
                return (false, None);
            }
        }
    }
    order.reverse();
    (true, Some(EliminationOrdering { ordering: order }))
}

/// Chordality by exhaustive induced-cycle enumeration; every vertex subset
/// of size >= 4 is tested for being a chordless cycle. Capped at
/// [`BRUTE_FORCE_CAP`] vertices.
pub fn chordal_bruteforce(g: &DecomposableGraph) -> Result<bool> {
    let vertices: Vec<NodeId> = g.vertices().collect();
    let n = vertices.len();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap(n, BRUTE_FORCE_CAP));
    }
    for mask in 0u32..(1 << n) {
        if (mask.count_ones() as usize) < 4 {
            continue;
        }
        let subset: Vec<NodeId> = (0..n)
            .filter(|&ix| mask & (1 << ix) != 0)
            .map(|ix| vertices[ix])
            .collect();
        if induces_cycle(g, &subset) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff the induced subgraph on `subset` is a single chordless cycle:
/// every vertex has induced degree exactly 2 and the subgraph is connected.
fn induces_cycle(g: &DecomposableGraph, subset: &[NodeId]) -> bool {
    let inset: BTreeSet<NodeId> = subset.iter().copied().collect();
    for &v in subset {
        let deg = g
            .neighbors_of(v)
            .unwrap()
            .iter()
            .filter(|w| inset.contains(w))
            .count();
        if deg != 2 {
            return false;
        }
    }
    // connectivity of the induced 2-regular subgraph
    let mut seen = BTreeSet::new();
    let mut stack = vec![subset[0]];
    seen.insert(subset[0]);
    while let Some(v) = stack.pop() {
        for &w in g.neighbors_of(v).unwrap() {
            if inset.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == subset.len()
}

/// Bron-Kerbosch with pivoting: exactly the inclusion-maximal complete
/// subgraphs. Isolated vertices appear as singleton cliques.
pub fn maximal_cliques(g: &DecomposableGraph) -> Vec<BTreeSet<NodeId>> {
    if g.n_vertices() == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut r = BTreeSet::new();
    let p: BTreeSet<NodeId> = g.vertices().collect();
    let x = BTreeSet::new();
    bron_kerbosch(g, &mut r, p, x, &mut out);
    out.sort();
    out
}

fn bron_kerbosch(
    g: &DecomposableGraph,
    r: &mut BTreeSet<NodeId>,
    mut p: BTreeSet<NodeId>,
    mut x: BTreeSet<NodeId>,
    out: &mut Vec<BTreeSet<NodeId>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| {
            let nbrs = g.neighbors_of(u).unwrap();
            (
                p.iter().filter(|v| nbrs.contains(v)).count(),
                std::cmp::Reverse(u),
            )
        })
        .unwrap();
    let pivot_nbrs = g.neighbors_of(pivot).unwrap().clone();
    let candidates: Vec<NodeId> = p
        .iter()
        .copied()
        .filter(|v| !pivot_nbrs.contains(v))
        .collect();
    for v in candidates {
        let nbrs = g.neighbors_of(v).unwrap().clone();
        r.insert(v);
        bron_kerbosch(
            g,
            r,
            p.iter().copied().filter(|w| nbrs.contains(w)).collect(),
            x.iter().copied().filter(|w| nbrs.contains(w)).collect(),
            out,
        );
        r.remove(&v);
        p.remove(&v);
        x.insert(v);
    }
}

/// A junction tree over the maximal cliques of a chordal graph.
#[derive(Debug, Clone)]
pub struct JunctionTree {
    /// Clique-node `CliqueId(ix)` corresponds to `cliques[ix]`.
    pub tree: LatentTree,
    pub cliques: Vec<BTreeSet<NodeId>>,
    /// Nonempty edge intersections, sorted; the minimal-separator multiset.
    pub separators: Vec<BTreeSet<NodeId>>,
}

/// Builds a junction tree by maximum-weight spanning tree on the clique
/// graph with weights `|C_i & C_j|`. Disconnected components are joined by
/// empty separators, which are not recorded in the multiset.
pub fn build_junction_tree(g: &DecomposableGraph) -> Result<JunctionTree> {
    build_junction_tree_tiebreak(g, |_| 0)
}

/// Same construction with a caller-controlled tie-break among equal-weight
/// clique-graph edges; the separator multiset is invariant to it.
pub fn build_junction_tree_tiebreak(
    g: &DecomposableGraph,
    tiebreak: impl Fn((usize, usize)) -> u64,
) -> Result<JunctionTree> {
    let (chordal, _) = is_chordal_mcs(g);
    if !chordal {
        return Err(Error::NotChordal);
    }
    let cliques = maximal_cliques(g);
    let m = cliques.len();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let w = cliques[i].intersection(&cliques[j]).count();
            edges.push((i, j, w));
        }
    }
    edges.sort_by_key(|&(i, j, w)| (std::cmp::Reverse(w), tiebreak((i, j)), i, j));
    // Kruskal
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut chosen = Vec::new();
    let mut separators = Vec::new();
    for (i, j, w) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            chosen.push((CliqueId(i as u32), CliqueId(j as u32)));
            if w > 0 {
                separators.push(cliques[i].intersection(&cliques[j]).copied().collect());
            }
        }
    }
    separators.sort();
    let tree = LatentTree::new((0..m as u32).map(CliqueId), chosen)?;
    Ok(JunctionTree {
        tree,
        cliques,
        separators,
    })
}

/// Running intersection property: each clique's intersection with the
/// union of its predecessors is contained in some single predecessor.
pub fn verify_rip(sequence: &[BTreeSet<NodeId>]) -> bool {
    let mut history: BTreeSet<NodeId> = BTreeSet::new();
    for (j, clique) in sequence.iter().enumerate() {
        if j > 0 {
            let sep: BTreeSet<NodeId> = history.intersection(clique).copied().collect();
            if !sequence[..j].iter().any(|earlier| sep.is_subset(earlier)) {
                return false;
            }
        }
        history.extend(clique.iter().copied());
    }
    true
}

/// Clique sequence in DFS preorder of the junction tree from `root`.
pub fn dfs_preorder_sequence(jt: &JunctionTree, root: CliqueId) -> Result<Vec<BTreeSet<NodeId>>> {
    if !jt.tree.contains(root) {
        return Err(Error::UnknownClique(root));
    }
    let mut seq = Vec::new();
    let mut seen = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        seq.push(jt.cliques[v.0 as usize].clone());
        for &w in jt.tree.neighbors_of(v)?.iter().rev() {
            if !seen.contains(&w) {
                stack.push(w);
            }
        }
    }
    Ok(seq)
}
