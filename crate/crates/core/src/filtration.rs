//! Height functions on embedded graphs.

use std::collections::{HashMap, HashSet};
use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_io::EmbeddedGraph;

/// Default absolute tolerance under which adjacent values are considered equal.
pub const DEFAULT_COLLAPSE_TOL: f64 = 1e-9;

/// A graph with one real value per vertex.
///
/// Edges are stored as index pairs into `ids`/`values`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarGraph {
    ids: Vec<i64>,
    values: Vec<f64>,
    edges: Vec<(usize, usize)>,
    angle: Option<f64>,
}

impl ScalarGraph {
    /// Builds a scalar graph from `(id, value)` pairs and id-pair edges.
    pub fn new(vertices: &[(i64, f64)], edges: &[(i64, i64)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, &(id, _)) in vertices.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(Error::DuplicateVertex(id));
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            let iu = *index.get(&u).ok_or(Error::DanglingEdge(u, v, u))?;
            let iv = *index.get(&v).ok_or(Error::DanglingEdge(u, v, v))?;
            if iu == iv {
                return Err(Error::SelfLoop(u));
            }
            let key = (iu.min(iv), iu.max(iv));
            if seen.insert(key) {
                out.push(key);
            }
        }
        Ok(Self {
            ids: vertices.iter().map(|&(id, _)| id).collect(),
            values: vertices.iter().map(|&(_, v)| v).collect(),
            edges: out,
            angle: None,
        })
    }

    pub fn ids(&self) -> &[i64] {
        &self.ids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Direction the values were taken along, if produced by [`direction_filter`].
    pub fn angle(&self) -> Option<f64> {
        self.angle
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn value_of(&self, id: i64) -> Option<f64> {
        self.ids.iter().position(|&i| i == id).map(|i| self.values[i])
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.ids.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn component_count(&self) -> usize {
        crate::graph_io::components(self.len(), &self.edges).len()
    }

    /// Number of vertices with no strictly lower neighbour.
    pub fn local_minima_count(&self) -> usize {
        let adj = self.adjacency();
        (0..self.len())
            .filter(|&v| adj[v].iter().all(|&w| self.values[w] >= self.values[v]))
            .count()
    }
}

/// Unit direction `(cos, sin)` for an angle, exact on quarter turns.
pub fn direction(angle: f64) -> (f64, f64) {
    let wrapped = angle.rem_euclid(TAU);
    let quarters = wrapped / FRAC_PI_2;
    let nearest = quarters.round();
    if (quarters - nearest).abs() < 1e-12 {
        match (nearest as i64).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        let (s, c) = wrapped.sin_cos();
        (c, s)
    }
}

/// Projects every vertex onto the unit vector at `angle`.
///
/// At `angle = pi/2` the value is the y-coordinate.
pub fn direction_filter(g: &EmbeddedGraph, angle: f64) -> ScalarGraph {
    let (c, s) = direction(angle);
    let index = g.index_of();
    ScalarGraph {
        ids: g.vertices().iter().map(|v| v.id).collect(),
        values: g.vertices().iter().map(|v| v.x * c + v.y * s).collect(),
        edges: g.edges().iter().map(|(u, v)| (index[u], index[v])).collect(),
        angle: Some(angle),
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Contracts every set of vertices linked by edges whose endpoint values
/// differ by at most `tol`.
///
/// Each contracted set keeps the id and value of its smallest-id member.
/// Contraction repeats until no edge joins values within `tol`, so the output
/// always has distinct adjacent values and the operation is idempotent.
pub fn collapse_equal_adjacent(sg: &ScalarGraph, tol: f64) -> ScalarGraph {
    let mut current = sg.clone();
    loop {
        let n = current.len();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut merged = false;
        for &(u, v) in &current.edges {
            if (current.values[u] - current.values[v]).abs() <= tol {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru] = rv;
                    merged = true;
                }
            }
        }
        if !merged {
            return current;
        }

        // representative of each class is its smallest id
        let mut best: HashMap<usize, usize> = HashMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            best.entry(r)
                .and_modify(|b| {
                    if current.ids[v] < current.ids[*b] {
                        *b = v;
                    }
                })
                .or_insert(v);
        }
        let mut new_index = vec![usize::MAX; n];
        let mut ids = Vec::new();
        let mut values = Vec::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            if best[&r] == v {
                new_index[v] = ids.len();
                ids.push(current.ids[v]);
                values.push(current.values[v]);
            }
        }
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for &(u, v) in &current.edges {
            let a = new_index[best[&find(&mut parent, u)]];
            let b = new_index[best[&find(&mut parent, v)]];
            if a != b && seen.insert((a.min(b), a.max(b))) {
                edges.push((a.min(b), a.max(b)));
            }
        }
        current = ScalarGraph {
            ids,
            values,
            edges,
            angle: current.angle,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn point(x: f64, y: f64) -> EmbeddedGraph {
        EmbeddedGraph::from_points(&[(x, y)], &[]).unwrap()
    }

    #[test]
    fn projection_examples() {
        assert_eq!(direction_filter(&point(3.0, 4.0), FRAC_PI_2).values(), &[4.0]);
        assert_eq!(direction_filter(&point(3.0, 4.0), 0.0).values(), &[3.0]);
        let v = direction_filter(&point(1.0, 1.0), FRAC_PI_4).values()[0];
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(direction_filter(&point(3.0, 4.0), PI).values(), &[-3.0]);
        assert_eq!(direction_filter(&point(3.0, 4.0), -FRAC_PI_2).values(), &[-4.0]);
    }

    #[test]
    fn collapse_path_with_flat_start() {
        let sg = ScalarGraph::new(&[(0, 0.0), (1, 0.0), (2, 5.0)], &[(0, 1), (1, 2)]).unwrap();
        let out = collapse_equal_adjacent(&sg, 0.0);
        assert_eq!(out.ids(), &[0, 2]);
        assert_eq!(out.values(), &[0.0, 5.0]);
        assert_eq!(out.edges(), &[(0, 1)]);
    }

    #[test]
    fn collapse_identity_on_distinct_values() {
        let sg = ScalarGraph::new(&[(0, 0.0), (1, 1.0), (2, 2.0)], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(collapse_equal_adjacent(&sg, DEFAULT_COLLAPSE_TOL), sg);
    }

    #[test]
    fn collapse_flat_triangle_to_point() {
        let sg = ScalarGraph::new(&[(4, 0.0), (2, 0.0), (7, 0.0)], &[(4, 2), (2, 7), (7, 4)]).unwrap();
        let out = collapse_equal_adjacent(&sg, 0.0);
        assert_eq!(out.ids(), &[2]);
        assert!(out.edges().is_empty());
    }

    #[test]
    fn collapse_keeps_minimum_id_value() {
        // chain drift: 0 ~ 1 ~ 2 within tol; representative id 0 keeps its own value
        let sg = ScalarGraph::new(&[(5, 0.3), (0, 0.0), (9, 0.6), (3, 10.0)], &[(5, 0), (5, 9), (9, 3)])
            .unwrap();
        let out = collapse_equal_adjacent(&sg, 0.35);
        assert_eq!(out.ids(), &[0, 3]);
        assert_eq!(out.values(), &[0.0, 10.0]);
    }

    #[test]
    fn collapse_repeats_until_fixpoint() {
        // first pass yields {0,1} at 0.0 and {2,3} at 0.2, which are then within tol
        let sg = ScalarGraph::new(&[(0, 0.0), (1, 0.3), (2, 0.2), (3, -0.05)], &[(0, 1), (1, 3), (3, 2)])
            .unwrap();
        let once = collapse_equal_adjacent(&sg, 0.3);
        assert_eq!(once.ids(), &[0]);
        assert_eq!(collapse_equal_adjacent(&once, 0.3), once);
    }
}
