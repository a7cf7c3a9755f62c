//! Core entities: embedded point sets, latent trees, bipartite states and
//! projected graphs.
//!
//! All types are immutable snapshots for readers; mutation happens through
//! explicit copy-or-builder transitions (`BipartiteState::connect` and
//! friends are owned-writer operations). Ids are dense nonnegative integers
//! assigned at point-sampling time in ascending location order, so the
//! combinatorial code never touches real numbers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::real::Real;

/// Identifier of a clique-node (a vertex of the latent tree).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CliqueId(pub u32);

/// Identifier of a graph node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for CliqueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Uniform neighbourhood access over the graph-like structures, mirroring
/// the overloaded `nei`/`deg` operators.
pub trait Adjacency {
    type Vertex: Copy + Ord;
    type Neighbor: Copy + Ord;

    fn neighbors_of(&self, v: Self::Vertex) -> Result<&BTreeSet<Self::Neighbor>>;

    fn degree_of(&self, v: Self::Vertex) -> Result<usize> {
        Ok(self.neighbors_of(v)?.len())
    }
}

/// Truncation bounds for the two Poisson processes: clique-nodes live on
/// `[0, r'] x [0, c']`, nodes on `[0, r] x [0, c]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWindow<F> {
    pub r_prime: F,
    pub c_prime: F,
    pub r: F,
    pub c: F,
}

impl<F: Real> TruncationWindow<F> {
    pub fn new(r_prime: F, c_prime: F, r: F, c: F) -> Result<Self> {
        for (name, v) in [("r'", r_prime), ("c'", c_prime), ("r", r), ("c", c)] {
            if !(v > F::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "window bound {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(Self {
            r_prime,
            c_prime,
            r,
            c,
        })
    }
}

/// A clique-node embedded in the positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliquePoint<F> {
    pub id: CliqueId,
    pub location: F,
    pub weight: F,
}

/// A graph node embedded in the positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePoint<F> {
    pub id: NodeId,
    pub location: F,
    pub weight: F,
}

/// Locations and weights of the two point processes. Entries are sorted by
/// id; ids are assigned in ascending location order at sampling time, with
/// repair nodes appended past the truncation afterwards.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSet<F> {
    clique_points: Vec<CliquePoint<F>>,
    node_points: Vec<NodePoint<F>>,
}

impl<F: Real> PointSet<F> {
    pub fn new(
        mut clique_points: Vec<CliquePoint<F>>,
        mut node_points: Vec<NodePoint<F>>,
    ) -> Result<Self> {
        clique_points.sort_by_key(|p| p.id);
        node_points.sort_by_key(|p| p.id);
        for w in clique_points.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidParameter(format!("duplicate {}", w[0].id)));
            }
        }
        for w in node_points.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::IdCollision(w[0].id));
            }
        }
        for p in &clique_points {
            if p.location < F::zero() || p.weight < F::zero() {
                return Err(Error::InvalidParameter(format!(
                    "negative coordinate on {}",
                    p.id
                )));
            }
        }
        for p in &node_points {
            if p.location < F::zero() || p.weight < F::zero() {
                return Err(Error::InvalidParameter(format!(
                    "negative coordinate on {}",
                    p.id
                )));
            }
        }
        Ok(Self {
            clique_points,
            node_points,
        })
    }

    pub fn clique_points(&self) -> &[CliquePoint<F>] {
        &self.clique_points
    }

    pub fn node_points(&self) -> &[NodePoint<F>] {
        &self.node_points
    }

    pub fn clique_weight(&self, k: CliqueId) -> Result<F> {
        self.clique_points
            .binary_search_by_key(&k, |p| p.id)
            .map(|ix| self.clique_points[ix].weight)
            .map_err(|_| Error::UnknownClique(k))
    }

    pub fn node_weight(&self, i: NodeId) -> Result<F> {
        self.node_points
            .binary_search_by_key(&i, |p| p.id)
            .map(|ix| self.node_points[ix].weight)
            .map_err(|_| Error::UnknownNode(i))
    }

    /// Appends a repair node; its id must be fresh.
    pub fn push_node(&mut self, p: NodePoint<F>) -> Result<()> {
        if self
            .node_points
            .binary_search_by_key(&p.id, |q| q.id)
            .is_ok()
        {
            return Err(Error::IdCollision(p.id));
        }
        self.node_points.push(p);
        self.node_points.sort_by_key(|q| q.id);
        Ok(())
    }
}

/// Undirected tree over clique-node ids: connected with `|E| = |V| - 1`.
/// The empty and the single-vertex tree are both valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatentTree {
    adj: BTreeMap<CliqueId, BTreeSet<CliqueId>>,
}

impl LatentTree {
    pub fn new(
        vertices: impl IntoIterator<Item = CliqueId>,
        edges: impl IntoIterator<Item = (CliqueId, CliqueId)>,
    ) -> Result<Self> {
        let mut adj: BTreeMap<CliqueId, BTreeSet<CliqueId>> =
            vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        let mut n_edges = 0usize;
        for (a, b) in edges {
            if a == b {
                return Err(Error::NotSimple(format!("self-loop on {a}")));
            }
            if !adj.contains_key(&a) {
                return Err(Error::UnknownClique(a));
            }
            if !adj.contains_key(&b) {
                return Err(Error::UnknownClique(b));
            }
            let inserted = adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
            if !inserted {
                return Err(Error::NotSimple(format!("duplicate edge ({a}, {b})")));
            }
            n_edges += 1;
        }
        let tree = Self { adj };
        if tree.adj.is_empty() {
            return Ok(tree);
        }
        if n_edges + 1 != tree.adj.len() {
            return Err(Error::NotATree(format!(
                "{} edges for {} vertices",
                n_edges,
                tree.adj.len()
            )));
        }
        let root = *tree.adj.keys().next().unwrap();
        if tree.reachable_from(root, None).len() != tree.adj.len() {
            return Err(Error::NotATree("disconnected".into()));
        }
        Ok(tree)
    }

    pub fn empty() -> Self {
        Self {
            adj: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains(&self, k: CliqueId) -> bool {
        self.adj.contains_key(&k)
    }

    pub fn vertices(&self) -> impl Iterator<Item = CliqueId> + '_ {
        self.adj.keys().copied()
    }

    /// Edges with the smaller id first, ascending.
    pub fn edges(&self) -> Vec<(CliqueId, CliqueId)> {
        let mut out = Vec::with_capacity(self.adj.len().saturating_sub(1));
        for (&a, nbrs) in &self.adj {
            for &b in nbrs {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, a: CliqueId, b: CliqueId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// Vertices reachable from `start`, optionally treating one edge as cut.
    pub fn reachable_from(
        &self,
        start: CliqueId,
        cut_edge: Option<(CliqueId, CliqueId)>,
    ) -> BTreeSet<CliqueId> {
        let mut seen = BTreeSet::new();
        if !self.adj.contains_key(&start) {
            return seen;
        }
        let blocked = |x: CliqueId, y: CliqueId| {
            cut_edge.is_some_and(|(a, b)| (x, y) == (a, b) || (x, y) == (b, a))
        };
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for &w in &self.adj[&v] {
                if !blocked(v, w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// BFS distances from `root`.
    pub fn distances_from(&self, root: CliqueId) -> Result<BTreeMap<CliqueId, usize>> {
        if !self.contains(root) {
            return Err(Error::UnknownClique(root));
        }
        let mut dist = BTreeMap::new();
        dist.insert(root, 0usize);
        let mut frontier = vec![root];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in frontier {
                let d = dist[&v];
                for &w in &self.adj[&v] {
                    if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                        e.insert(d + 1);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        Ok(dist)
    }

    /// Maximum distance between two leaves (0 for trees with < 2 vertices).
    pub fn leaf_diameter(&self) -> usize {
        if self.len() < 2 {
            return 0;
        }
        let start = *self.adj.keys().next().unwrap();
        let d0 = self.distances_from(start).unwrap();
        let (&far, _) = d0
            .iter()
            .max_by_key(|(v, d)| (**d, std::cmp::Reverse(**v)))
            .unwrap();
        let d1 = self.distances_from(far).unwrap();
        d1.values().copied().max().unwrap_or(0)
    }

    /// A center vertex: midpoint of a diameter path, smaller id on ties.
    pub fn center(&self) -> Option<CliqueId> {
        if self.is_empty() {
            return None;
        }
        if self.len() == 1 {
            return self.adj.keys().next().copied();
        }
        let start = *self.adj.keys().next().unwrap();
        let d0 = self.distances_from(start).unwrap();
        let (&a, _) = d0
            .iter()
            .max_by_key(|(v, d)| (**d, std::cmp::Reverse(**v)))
            .unwrap();
        let da = self.distances_from(a).unwrap();
        let (&b, _) = da
            .iter()
            .max_by_key(|(v, d)| (**d, std::cmp::Reverse(**v)))
            .unwrap();
        let db = self.distances_from(b).unwrap();
        let diam = da[&b];
        // Vertices on the a-b path satisfy da[v] + db[v] == diam; the center
        // minimizes the larger of the two.
        self.adj
            .keys()
            .copied()
            .filter(|v| da[v] + db[v] == diam)
            .min_by_key(|v| (da[v].max(db[v]), *v))
    }

    /// Replaces edge `(k, s)` by `(k, m)`. `m` must lie on the `s`-side of
    /// the cut so that the result stays a tree; `m == s` is the identity.
    pub fn rewired(&self, k: CliqueId, s: CliqueId, m: CliqueId) -> Result<LatentTree> {
        if !self.has_edge(k, s) {
            return Err(Error::EdgeNotInTree(k, s));
        }
        if m == s {
            return Ok(self.clone());
        }
        if !self.contains(m) {
            return Err(Error::UnknownClique(m));
        }
        let s_side = self.reachable_from(s, Some((k, s)));
        if !s_side.contains(&m) {
            return Err(Error::NotATree(format!(
                "rewire target {m} not on the {s} side"
            )));
        }
        let mut adj = self.adj.clone();
        adj.get_mut(&k).unwrap().remove(&s);
        adj.get_mut(&s).unwrap().remove(&k);
        adj.get_mut(&k).unwrap().insert(m);
        adj.get_mut(&m).unwrap().insert(k);
        Ok(Self { adj })
    }
}

impl Adjacency for LatentTree {
    type Vertex = CliqueId;
    type Neighbor = CliqueId;

    fn neighbors_of(&self, v: CliqueId) -> Result<&BTreeSet<CliqueId>> {
        self.adj.get(&v).ok_or(Error::UnknownClique(v))
    }
}

fn empty_node_set() -> &'static BTreeSet<NodeId> {
    static EMPTY: OnceLock<BTreeSet<NodeId>> = OnceLock::new();
    EMPTY.get_or_init(BTreeSet::new)
}

fn empty_clique_set() -> &'static BTreeSet<CliqueId> {
    static EMPTY: OnceLock<BTreeSet<CliqueId>> = OnceLock::new();
    EMPTY.get_or_init(BTreeSet::new)
}

/// The edge set `Z` between clique-nodes and nodes, indexed both ways.
/// Row and column indices are kept as exact transposes of each other.
/// Empty rows and columns are persisted: the universes record every known
/// clique-node and node id, active or not.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BipartiteState {
    rows: BTreeMap<CliqueId, BTreeSet<NodeId>>,
    cols: BTreeMap<NodeId, BTreeSet<CliqueId>>,
}

impl BipartiteState {
    /// An edgeless state over explicit universes.
    pub fn empty(
        cliques: impl IntoIterator<Item = CliqueId>,
        nodes: impl IntoIterator<Item = NodeId>,
    ) -> Self {
        Self {
            rows: cliques.into_iter().map(|k| (k, BTreeSet::new())).collect(),
            cols: nodes.into_iter().map(|i| (i, BTreeSet::new())).collect(),
        }
    }

    pub fn from_edges(
        cliques: impl IntoIterator<Item = CliqueId>,
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (CliqueId, NodeId)>,
    ) -> Result<Self> {
        let mut z = Self::empty(cliques, nodes);
        for (k, i) in edges {
            if !z.rows.contains_key(&k) {
                return Err(Error::UnknownClique(k));
            }
            if !z.cols.contains_key(&i) {
                return Err(Error::UnknownNode(i));
            }
            z.connect(k, i)?;
        }
        Ok(z)
    }

    pub fn cliques(&self) -> impl Iterator<Item = CliqueId> + '_ {
        self.rows.keys().copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.cols.keys().copied()
    }

    pub fn n_cliques(&self) -> usize {
        self.rows.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.cols.len()
    }

    pub fn n_edges(&self) -> usize {
        self.rows.values().map(BTreeSet::len).sum()
    }

    /// Member nodes of clique `k`; empty for unknown or inactive rows.
    pub fn members(&self, k: CliqueId) -> &BTreeSet<NodeId> {
        self.rows.get(&k).unwrap_or_else(|| empty_node_set())
    }

    /// Clique memberships of node `i`; empty for unknown or inactive columns.
    pub fn memberships(&self, i: NodeId) -> &BTreeSet<CliqueId> {
        self.cols.get(&i).unwrap_or_else(|| empty_clique_set())
    }

    pub fn has_edge(&self, k: CliqueId, i: NodeId) -> bool {
        self.rows.get(&k).is_some_and(|r| r.contains(&i))
    }

    pub fn contains_clique(&self, k: CliqueId) -> bool {
        self.rows.contains_key(&k)
    }

    pub fn contains_node(&self, i: NodeId) -> bool {
        self.cols.contains_key(&i)
    }

    /// Edges sorted by (clique, node).
    pub fn edges(&self) -> Vec<(CliqueId, NodeId)> {
        let mut out = Vec::with_capacity(self.n_edges());
        for (&k, row) in &self.rows {
            for &i in row {
                out.push((k, i));
            }
        }
        out
    }

    /// Adds an edge, creating universe entries as needed.
    pub fn connect(&mut self, k: CliqueId, i: NodeId) -> Result<()> {
        let row = self.rows.entry(k).or_default();
        if !row.insert(i) {
            return Err(Error::NotSimple(format!("parallel edge ({k}, {i})")));
        }
        self.cols.entry(i).or_default().insert(k);
        Ok(())
    }

    pub fn set_edge(&mut self, k: CliqueId, i: NodeId, present: bool) {
        if present {
            self.rows.entry(k).or_default().insert(i);
            self.cols.entry(i).or_default().insert(k);
        } else {
            if let Some(r) = self.rows.get_mut(&k) {
                r.remove(&i);
            }
            if let Some(c) = self.cols.get_mut(&i) {
                c.remove(&k);
            }
        }
    }

    pub fn disconnect(&mut self, k: CliqueId, i: NodeId) -> Result<()> {
        let had = self.rows.get_mut(&k).is_some_and(|r| r.remove(&i));
        if !had {
            return Err(Error::InvalidParameter(format!("edge ({k}, {i}) absent")));
        }
        self.cols.get_mut(&i).unwrap().remove(&k);
        Ok(())
    }

    /// Registers a node id in the universe without any edge.
    pub fn add_node(&mut self, i: NodeId) -> Result<()> {
        if self.cols.contains_key(&i) {
            return Err(Error::IdCollision(i));
        }
        self.cols.insert(i, BTreeSet::new());
        Ok(())
    }

    /// Active sets `(v_n(Z), v_c(Z))`: ids appearing in at least one edge.
    pub fn vertex_partition(&self) -> (BTreeSet<NodeId>, BTreeSet<CliqueId>) {
        let nodes = self
            .cols
            .iter()
            .filter(|(_, c)| !c.is_empty())
            .map(|(&i, _)| i)
            .collect();
        let cliques = self
            .rows
            .iter()
            .filter(|(_, r)| !r.is_empty())
            .map(|(&k, _)| k)
            .collect();
        (nodes, cliques)
    }

    /// Rebuilds both indices from the edge list; used to audit coherence.
    pub fn rebuilt(&self) -> Self {
        let mut z = Self::empty(self.cliques(), self.nodes());
        for (k, i) in self.edges() {
            z.set_edge(k, i, true);
        }
        z
    }

    /// Restriction to the given rows (column universe preserved).
    pub fn restrict_rows(&self, keep: &BTreeSet<CliqueId>) -> Self {
        let mut z = Self::empty(keep.iter().copied(), self.nodes());
        for (&k, row) in &self.rows {
            if keep.contains(&k) {
                for &i in row {
                    z.set_edge(k, i, true);
                }
            }
        }
        z
    }
}

/// View of a bipartite state from the clique-node side.
pub struct CliqueSide<'a>(pub &'a BipartiteState);
/// View of a bipartite state from the node side.
pub struct NodeSide<'a>(pub &'a BipartiteState);

impl Adjacency for CliqueSide<'_> {
    type Vertex = CliqueId;
    type Neighbor = NodeId;

    fn neighbors_of(&self, v: CliqueId) -> Result<&BTreeSet<NodeId>> {
        if !self.0.contains_clique(v) {
            return Err(Error::UnknownClique(v));
        }
        Ok(self.0.members(v))
    }
}

impl Adjacency for NodeSide<'_> {
    type Vertex = NodeId;
    type Neighbor = CliqueId;

    fn neighbors_of(&self, v: NodeId) -> Result<&BTreeSet<CliqueId>> {
        if !self.0.contains_node(v) {
            return Err(Error::UnknownNode(v));
        }
        Ok(self.0.memberships(v))
    }
}

/// Simple undirected graph over node ids; the projection target.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecomposableGraph {
    adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl DecomposableGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> =
            vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        for (a, b) in edges {
            if a == b {
                return Err(Error::NotSimple(format!("self-loop on {a}")));
            }
            if !adj.contains_key(&a) {
                return Err(Error::UnknownNode(a));
            }
            if !adj.contains_key(&b) {
                return Err(Error::UnknownNode(b));
            }
            adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
        }
        Ok(Self { adj })
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// Edges with the smaller id first, ascending.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.n_edges());
        for (&a, nbrs) in &self.adj {
            for &b in nbrs {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// True iff `set` is pairwise adjacent.
    pub fn is_complete(&self, set: &BTreeSet<NodeId>) -> bool {
        let items: Vec<_> = set.iter().copied().collect();
        for (ix, &a) in items.iter().enumerate() {
            for &b in &items[ix + 1..] {
                if !self.has_edge(a, b) {
                    return false;
                }
            }
        }
        true
    }
}

impl Adjacency for DecomposableGraph {
    type Vertex = NodeId;
    type Neighbor = NodeId;

    fn neighbors_of(&self, v: NodeId) -> Result<&BTreeSet<NodeId>> {
        self.adj.get(&v).ok_or(Error::UnknownNode(v))
    }
}

/// Free-function spellings of the `nei`/`deg` operators.
pub fn neighbors_of<G: Adjacency>(g: &G, v: G::Vertex) -> Result<BTreeSet<G::Neighbor>> {
    g.neighbors_of(v).cloned()
}

pub fn degree_of<G: Adjacency>(g: &G, v: G::Vertex) -> Result<usize> {
    g.degree_of(v)
}
