//! Whitespace-delimited UTF-8 text formats for points, trees, bipartite
//! states and graphs. Lines are sorted ascending by id; floats carry 17
//! significant digits so round-trips are exact.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{
    BipartiteState, CliqueId, CliquePoint, DecomposableGraph, LatentTree, NodeId, NodePoint,
    PointSet,
};
use crate::real::Real;

fn fmt_float<F: Real>(v: F) -> String {
    format!("{:.16e}", v)
}

fn parse_float<F: Real>(s: &str) -> Result<F> {
    s.parse::<F>()
        .map_err(|_| Error::Parse(format!("bad float {s:?}")))
}

fn parse_u32(s: &str) -> Result<u32> {
    s.parse::<u32>()
        .map_err(|_| Error::Parse(format!("bad id {s:?}")))
}

/// `C <cliqueId> <theta'> <vartheta'>` and `N <nodeId> <theta> <vartheta>`.
pub fn write_points<F: Real>(points: &PointSet<F>) -> String {
    let mut out = String::new();
    for p in points.clique_points() {
        let _ = writeln!(
            out,
            "C {} {} {}",
            p.id.0,
            fmt_float(p.location),
            fmt_float(p.weight)
        );
    }
    for p in points.node_points() {
        let _ = writeln!(
            out,
            "N {} {} {}",
            p.id.0,
            fmt_float(p.location),
            fmt_float(p.weight)
        );
    }
    out
}

pub fn read_points<F: Real>(text: &str) -> Result<PointSet<F>> {
    let mut cliques = Vec::new();
    let mut nodes = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "points line {}: expected 4 fields",
                lineno + 1
            )));
        }
        match fields[0] {
            "C" => cliques.push(CliquePoint {
                id: CliqueId(parse_u32(fields[1])?),
                location: parse_float(fields[2])?,
                weight: parse_float(fields[3])?,
            }),
            "N" => nodes.push(NodePoint {
                id: NodeId(parse_u32(fields[1])?),
                location: parse_float(fields[2])?,
                weight: parse_float(fields[3])?,
            }),
            tag => {
                return Err(Error::Parse(format!(
                    "points line {}: tag {tag:?}",
                    lineno + 1
                )))
            }
        }
    }
    PointSet::new(cliques, nodes)
}

/// `E <cliqueId> <cliqueId>` lines, smaller id first. Isolated vertices are
/// carried as `V <cliqueId>` lines so single-vertex trees round-trip.
pub fn write_tree(tree: &LatentTree) -> String {
    let mut out = String::new();
    let mut in_edge = BTreeSet::new();
    for (a, b) in tree.edges() {
        in_edge.insert(a);
        in_edge.insert(b);
        let _ = writeln!(out, "E {} {}", a.0, b.0);
    }
    for v in tree.vertices() {
        if !in_edge.contains(&v) {
            let _ = writeln!(out, "V {}", v.0);
        }
    }
    out
}

pub fn read_tree(text: &str) -> Result<LatentTree> {
    let mut vertices = BTreeSet::new();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (fields[0], fields.len()) {
            ("E", 3) => {
                let a = CliqueId(parse_u32(fields[1])?);
                let b = CliqueId(parse_u32(fields[2])?);
                vertices.insert(a);
                vertices.insert(b);
                edges.push((a, b));
            }
            ("V", 2) => {
                vertices.insert(CliqueId(parse_u32(fields[1])?));
            }
            _ => return Err(Error::Parse(format!("tree line {}: {line:?}", lineno + 1))),
        }
    }
    LatentTree::new(vertices, edges)
}

/// `B <cliqueId> <nodeId>` lines plus `RC <cliqueId>` / `CN <nodeId>` lines
/// for inactive universe entries.
pub fn write_bipartite(z: &BipartiteState) -> String {
    let mut out = String::new();
    for (k, i) in z.edges() {
        let _ = writeln!(out, "B {} {}", k.0, i.0);
    }
    let (active_nodes, active_cliques) = z.vertex_partition();
    for k in z.cliques() {
        if !active_cliques.contains(&k) {
            let _ = writeln!(out, "RC {}", k.0);
        }
    }
    for i in z.nodes() {
        if !active_nodes.contains(&i) {
            let _ = writeln!(out, "CN {}", i.0);
        }
    }
    out
}

pub fn read_bipartite(text: &str) -> Result<BipartiteState> {
    let mut cliques = BTreeSet::new();
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (fields[0], fields.len()) {
            ("B", 3) => {
                let k = CliqueId(parse_u32(fields[1])?);
                let i = NodeId(parse_u32(fields[2])?);
                cliques.insert(k);
                nodes.insert(i);
                edges.push((k, i));
            }
            ("RC", 2) => {
                cliques.insert(CliqueId(parse_u32(fields[1])?));
            }
            ("CN", 2) => {
                nodes.insert(NodeId(parse_u32(fields[1])?));
            }
            _ => {
                return Err(Error::Parse(format!(
                    "bipartite line {}: {line:?}",
                    lineno + 1
                )))
            }
        }
    }
    BipartiteState::from_edges(cliques, nodes, edges)
}

/// `G <nodeId> <nodeId>` lines, smaller id first, plus `I <nodeId>` lines
/// for isolated vertices.
pub fn write_graph(g: &DecomposableGraph) -> String {
    use crate::model::Adjacency;
    let mut out = String::new();
    for (a, b) in g.edges() {
        let _ = writeln!(out, "G {} {}", a.0, b.0);
    }
    for v in g.vertices() {
        if g.degree_of(v).is_ok_and(|d| d == 0) {
            let _ = writeln!(out, "I {}", v.0);
        }
    }
    out
}

pub fn read_graph(text: &str) -> Result<DecomposableGraph> {
    let mut vertices = BTreeSet::new();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (fields[0], fields.len()) {
            ("G", 3) => {
                let a = NodeId(parse_u32(fields[1])?);
                let b = NodeId(parse_u32(fields[2])?);
                vertices.insert(a);
                vertices.insert(b);
                edges.push((a, b));
            }
            ("I", 2) => {
                vertices.insert(NodeId(parse_u32(fields[1])?));
            }
            _ => return Err(Error::Parse(format!("graph line {}: {line:?}", lineno + 1))),
        }
    }
    DecomposableGraph::new(vertices, edges)
}
