//! Embedded plane graphs: validation, preprocessing and on-disk formats.
//!
//! Two formats are understood. The canonical one is a single JSON document
//!
//! ```text
//! {"vertices":[{"id":0,"x":0.0,"y":0.0},...],"edges":[[0,1],...]}
//! ```
//!
//! and the interop one is a whitespace edge list whose coordinates live in a
//! `#`-prefixed header block:
//!
//! ```text
//! # id x y
//! # 0 0 0
//! # 1 1 0
//! 0 1
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: i64,
    pub x: f64,
    pub y: f64,
}

/// A graph whose vertices carry plane coordinates.
///
/// Construction through [`EmbeddedGraph::new`] guarantees unique ids, no
/// dangling endpoints, no self-loops and no parallel edges. Edges are stored
/// as `(min, max)` pairs in order of first appearance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(i64, i64)>,
}

#[derive(Deserialize)]
struct RawGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(i64, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    EdgeList,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(GraphFormat::Json),
            "edgelist" | "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            other => Err(Error::InvalidArgument(format!("unknown graph format {other:?}"))),
        }
    }
}

impl EmbeddedGraph {
    pub fn new(vertices: Vec<Vertex>, edges: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut ids = HashSet::with_capacity(vertices.len());
        for v in &vertices {
            if !ids.insert(v.id) {
                return Err(Error::DuplicateVertex(v.id));
            }
        }
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (u, v) in edges {
            for end in [u, v] {
                if !ids.contains(&end) {
                    return Err(Error::DanglingEdge(u, v, end));
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                kept.push(key);
            }
        }
        Ok(Self {
            vertices,
            edges: kept,
        })
    }

    /// Convenience constructor from bare coordinates; vertex `i` gets id `i`.
    pub fn from_points(points: &[(f64, f64)], edges: &[(usize, usize)]) -> Result<Self> {
        let vertices = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Vertex { id: i as i64, x, y })
            .collect();
        Self::new(vertices, edges.iter().map(|&(u, v)| (u as i64, v as i64)))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(i64, i64)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Map from vertex id to its position in [`Self::vertices`].
    pub fn index_of(&self) -> HashMap<i64, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect()
    }

    /// Edges as pairs of vertex positions.
    pub fn indexed_edges(&self) -> Vec<(usize, usize)> {
        let index = self.index_of();
        self.edges.iter().map(|(u, v)| (index[u], index[v])).collect()
    }

    /// Connected components as lists of vertex positions, each list ascending.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components(self.vertices.len(), &self.indexed_edges())
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Subgraph induced by the given vertex positions, keeping input order.
    pub fn induced(&self, keep: &[usize]) -> Result<Self> {
        let mut mask = vec![false; self.vertices.len()];
        for &i in keep {
            mask[i] = true;
        }
        let vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(v, _)| *v)
            .collect();
        let ids: HashSet<i64> = vertices.iter().map(|v| v.id).collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|(u, v)| ids.contains(u) && ids.contains(v));
        Self::new(vertices, edges)
    }

    /// Rigid translation by `(dx, dy)`.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.vertices {
            v.x += dx;
            v.y += dy;
        }
        out
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut out = self.clone();
        for v in &mut out.vertices {
            let (x, y) = (v.x, v.y);
            v.x = c * x - s * y;
            v.y = s * x + c * y;
        }
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawGraph = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.vertices, raw.edges)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn from_edge_list_str(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |what: &str| Error::Parse(format!("line {}: {what}: {line:?}", lineno + 1));
            if let Some(rest) = line.strip_prefix('#') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.is_empty() || fields == ["id", "x", "y"] {
                    continue;
                }
                if fields.len() != 3 {
                    return Err(parse_err("expected `# id x y`"));
                }
                let id = fields[0].parse().map_err(|_| parse_err("bad vertex id"))?;
                let x = fields[1].parse().map_err(|_| parse_err("bad x coordinate"))?;
                let y = fields[2].parse().map_err(|_| parse_err("bad y coordinate"))?;
                vertices.push(Vertex { id, x, y });
            } else {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(parse_err("expected `u v`"));
                }
                let u = fields[0].parse().map_err(|_| parse_err("bad edge endpoint"))?;
                let v = fields[1].parse().map_err(|_| parse_err("bad edge endpoint"))?;
                edges.push((u, v));
            }
        }
        Self::new(vertices, edges)
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut out = String::from("# id x y\n");
        for v in &self.vertices {
            let _ = writeln!(out, "# {} {} {}", v.id, v.x, v.y);
        }
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Connected components of an index graph, each ascending, ordered by their
/// smallest member.
pub(crate) fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let c = out.len();
        let mut members = vec![start];
        label[start] = c;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if label[w] == usize::MAX {
                    label[w] = c;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn load_graph(path: impl AsRef<Path>, format: GraphFormat) -> Result<EmbeddedGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        GraphFormat::Json => EmbeddedGraph::from_json_str(&text),
        GraphFormat::EdgeList => EmbeddedGraph::from_edge_list_str(&text),
    }
}

pub fn write_graph(g: &EmbeddedGraph, path: impl AsRef<Path>, format: GraphFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        GraphFormat::Json => g.to_json_string(),
        GraphFormat::EdgeList => g.to_edge_list_string(),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Induced subgraph on the largest connected component.
///
/// Equal-size components are ranked by their smallest vertex id.
pub fn largest_component(g: &EmbeddedGraph) -> Result<EmbeddedGraph> {
    if g.vertices.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let comps = g.components();
    if comps.len() == 1 {
        return Ok(g.clone());
    }
    let min_id = |c: &Vec<usize>| c.iter().map(|&i| g.vertices[i].id).min().unwrap();
    let best = comps
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| min_id(b).cmp(&min_id(a))))
        .unwrap();
    g.induced(best)
}

/// Combinatorial isomorphism test; coordinates are ignored.
pub fn is_isomorphic(g: &EmbeddedGraph, h: &EmbeddedGraph) -> bool {
    let to_petgraph = |g: &EmbeddedGraph| {
        UnGraph::<(), ()>::from_edges(g.indexed_edges().iter().map(|&(u, v)| (u as u32, v as u32)))
    };
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let (mut pg, mut ph) = (to_petgraph(g), to_petgraph(h));
    // from_edges only creates vertices up to the largest endpoint
    while pg.node_count() < g.vertex_count() {
        pg.add_node(());
    }
    while ph.node_count() < h.vertex_count() {
        ph.add_node(());
    }
    petgraph::algo::is_isomorphic(&pg, &ph)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> EmbeddedGraph {
        EmbeddedGraph::from_points(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn triangle_json_loads() {
        let g = EmbeddedGraph::from_json_str(
            r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0},{"id":2,"x":0,"y":1}],
                "edges":[[0,1],[1,2],[2,0]]}"#,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g, triangle());
    }

    #[test]
    fn self_loop_rejected() {
        let err = EmbeddedGraph::from_json_str(r#"{"vertices":[{"id":0,"x":0,"y":0}],"edges":[[0,0]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::SelfLoop(0)));
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn parallel_edges_collapse() {
        let g = EmbeddedGraph::from_points(&[(0.0, 0.0), (1.0, 0.0)], &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn dangling_and_empty_rejected() {
        assert!(matches!(
            EmbeddedGraph::from_points(&[(0.0, 0.0)], &[(0, 3)]),
            Err(Error::DanglingEdge(0, 3, 3))
        ));
        assert!(matches!(EmbeddedGraph::new(vec![], []), Err(Error::EmptyGraph)));
        assert!(matches!(
            EmbeddedGraph::from_json_str("{\"vertices\": ["),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn largest_component_cases() {
        let t = triangle();
        assert_eq!(largest_component(&t).unwrap(), t);

        let pts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (5.0, 5.0), (6.0, 5.0)];
        let g = EmbeddedGraph::from_points(&pts, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        assert_eq!(largest_component(&g).unwrap(), t);

        // tie: both components have two vertices, the one holding id 0 wins
        let pts = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)];
        let g = EmbeddedGraph::from_points(&pts, &[(2, 3), (0, 1)]).unwrap();
        let lc = largest_component(&g).unwrap();
        let ids: Vec<i64> = lc.vertices().iter().map(|v| v.id).collect();
        assert_eq!(ids, vec![0, 1]);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = EmbeddedGraph::from_points(&[(0.5, -1.25), (1e-3, 7.0), (3.0, 3.0)], &[(0, 1)]).unwrap();
        let back = EmbeddedGraph::from_edge_list_str(&g.to_edge_list_string()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn write_then_load() {
        let dir = tempfile::tempdir().unwrap();
        for format in [GraphFormat::Json, GraphFormat::EdgeList] {
            let path = dir.path().join("t.graph");
            write_graph(&triangle(), &path, format).unwrap();
            assert_eq!(load_graph(&path, format).unwrap(), triangle());

            let single = EmbeddedGraph::from_points(&[(2.0, 3.0)], &[]).unwrap();
            write_graph(&single, &path, format).unwrap();
            let back = load_graph(&path, format).unwrap();
            assert_eq!((back.vertex_count(), back.edge_count()), (1, 0));
        }
    }

    #[test]
    fn write_to_unwritable_path_fails() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing-dir").join("g.json");
        assert!(matches!(write_graph(&triangle(), &path, GraphFormat::Json), Err(Error::Io { .. })));
    }

    #[test]
    fn isomorphism_ignores_coordinates() {
        let t2 = triangle().rotated(1.0).translated(3.0, -2.0);
        assert!(is_isomorphic(&triangle(), &t2));
        let square = EmbeddedGraph::from_points(
            &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
        )
        .unwrap();
        assert!(!is_isomorphic(&triangle(), &square));
    }
}
