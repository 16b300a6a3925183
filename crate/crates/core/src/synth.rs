//! Seeded generators for synthetic graphs, scalar graphs and merge trees.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::filtration::ScalarGraph;
use crate::graph_io::EmbeddedGraph;
use crate::merge_tree::MergeTree;

pub const DEFAULT_SEED: u64 = 20_200_801;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cycle through points sorted by angle on a randomly placed ellipse.
/// Strictly convex by construction.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, vertices: usize) -> EmbeddedGraph {
    let n = vertices.max(3);
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    let (a, b) = (rng.random_range(0.5..3.0), rng.random_range(0.5..3.0));
    let tilt = rng.random_range(0.0..TAU);
    let (cx, cy) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let (st, ct) = tilt.sin_cos();
    let pts: Vec<(f64, f64)> = angles
        .iter()
        .map(|&t| {
            let (x, y) = (a * t.cos(), b * t.sin());
            (cx + ct * x - st * y, cy + st * x + ct * y)
        })
        .collect();
    let m = pts.len();
    let edges: Vec<(usize, usize)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    EmbeddedGraph::from_points(&pts, &edges).expect("polygon is a valid graph")
}

/// Closed curve `r(t) = 1 + sum a_k cos(k t + p_k)` sampled at `samples` points.
pub fn random_smooth_shape<R: Rng>(rng: &mut R, samples: usize) -> EmbeddedGraph {
    let harmonics: Vec<(f64, f64, f64)> = (2..=4)
        .map(|k| (k as f64, rng.random_range(0.05..0.3), rng.random_range(0.0..TAU)))
        .collect();
    let pts: Vec<(f64, f64)> = (0..samples)
        .map(|i| {
            let t = TAU * i as f64 / samples as f64;
            let r = 1.0 + harmonics.iter().map(|&(k, a, p)| a * (k * t + p).cos()).sum::<f64>();
            (r * t.cos(), r * t.sin())
        })
        .collect();
    let edges: Vec<(usize, usize)> = (0..samples).map(|i| (i, (i + 1) % samples)).collect();
    EmbeddedGraph::from_points(&pts, &edges).expect("curve is a valid graph")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeClass {
    Star,
    Comb,
    Zigzag,
}

impl ShapeClass {
    pub const ALL: [ShapeClass; 3] = [ShapeClass::Star, ShapeClass::Comb, ShapeClass::Zigzag];
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeClass::Star => "star",
            ShapeClass::Comb => "comb",
            ShapeClass::Zigzag => "zigzag",
        })
    }
}

impl FromStr for ShapeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(ShapeClass::Star),
            "comb" => Ok(ShapeClass::Comb),
            "zigzag" => Ok(ShapeClass::Zigzag),
            other => Err(Error::InvalidArgument(format!("unknown shape class {other:?}"))),
        }
    }
}

/// Adds points along a straight segment, returning the far end's index.
fn polyline(pts: &mut Vec<(f64, f64)>, edges: &mut Vec<(usize, usize)>, from: usize, to: (f64, f64), pieces: usize) -> usize {
    let start = pts[from];
    let mut prev = from;
    for k in 1..=pieces {
        let t = k as f64 / pieces as f64;
        pts.push((start.0 + t * (to.0 - start.0), start.1 + t * (to.1 - start.1)));
        let cur = pts.len() - 1;
        edges.push((prev, cur));
        prev = cur;
    }
    prev
}

/// A noisy instance of a shape class. `noise` is the coordinate jitter.
pub fn shape_instance<R: Rng>(rng: &mut R, class: ShapeClass, noise: f64) -> EmbeddedGraph {
    let mut pts: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    let mut edges = Vec::new();
    match class {
        ShapeClass::Star => {
            let spokes = 5;
            let phase = rng.random_range(-0.1..0.1);
            for k in 0..spokes {
                let t = phase + TAU * k as f64 / spokes as f64;
                let len = 2.0 + rng.random_range(-0.1..0.1);
                polyline(&mut pts, &mut edges, 0, (len * t.cos(), len * t.sin()), 3);
            }
        }
        ShapeClass::Comb => {
            pts[0] = (-2.0, 1.0);
            let teeth = 4;
            let mut prev = 0;
            for k in 0..=teeth {
                let x = -2.0 + 4.0 * k as f64 / teeth as f64;
                if k > 0 {
                    prev = polyline(&mut pts, &mut edges, prev, (x, 1.0), 2);
                }
                let len = 2.0 + rng.random_range(-0.1..0.1);
                polyline(&mut pts, &mut edges, prev, (x, 1.0 - len), 3);
            }
        }
        ShapeClass::Zigzag => {
            pts[0] = (-2.0, 0.0);
            let teeth = 6;
            let mut prev = 0;
            for k in 1..=teeth {
                let x = -2.0 + 4.0 * k as f64 / teeth as f64;
                let y = if k % 2 == 1 { 1.5 } else { 0.0 } + rng.random_range(-0.1..0.1);
                prev = polyline(&mut pts, &mut edges, prev, (x, y), 2);
            }
        }
    }
    for p in &mut pts {
        p.0 += rng.random_range(-noise..=noise);
        p.1 += rng.random_range(-noise..=noise);
    }
    EmbeddedGraph::from_points(&pts, &edges).expect("shape is a valid graph")
}

/// A labelled synthetic collection: `per_class` instances of every class.
pub fn shape_dataset(per_class: usize, noise: f64, seed: u64) -> Vec<(String, ShapeClass, EmbeddedGraph)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for class in ShapeClass::ALL {
        for i in 0..per_class {
            out.push((format!("{class}{i}"), class, shape_instance(&mut r, class, noise)));
        }
    }
    out
}

/// `count` random convex polygons with 5 to 30 vertices.
pub fn convex_polygons(count: usize, seed: u64) -> Vec<EmbeddedGraph> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(5..=30);
            random_convex_polygon(&mut r, n)
        })
        .collect()
}

pub fn smooth_shapes(count: usize, samples: usize, seed: u64) -> Vec<EmbeddedGraph> {
    let mut r = rng(seed);
    (0..count).map(|_| random_smooth_shape(&mut r, samples)).collect()
}

/// Connected graph on `n` vertices with pairwise distinct values and
/// shuffled ids.
pub fn random_scalar_graph<R: Rng>(rng: &mut R, n: usize) -> ScalarGraph {
    let n = n.max(1);
    let mut ids: Vec<i64> = (0..n as i64).collect();
    ids.shuffle(rng);
    let mut values: Vec<f64> = (0..n).map(|i| i as f64 + rng.random_range(0.0..0.5)).collect();
    values.shuffle(rng);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((ids[u], ids[v]));
    }
    let extra = rng.random_range(0..=n);
    for _ in 0..extra {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v {
            edges.push((ids[u], ids[v]));
        }
    }
    let vertices: Vec<(i64, f64)> = ids.iter().copied().zip(values).collect();
    ScalarGraph::new(&vertices, &edges).expect("generated graph is valid")
}

/// Random merge tree with between 1 and `max_leaves` leaves and small
/// integer values; mostly binary, sometimes with a ternary merge.
pub fn random_merge_tree<R: Rng>(rng: &mut R, max_leaves: usize) -> MergeTree {
    let leaves = rng.random_range(1..=max_leaves.max(1));
    let mut values: Vec<f64> = (0..leaves).map(|_| rng.random_range(0..8) as f64).collect();
    let mut parent: Vec<usize> = (0..leaves).collect();
    let mut roots: Vec<usize> = (0..leaves).collect();
    while roots.len() > 1 {
        let k = if roots.len() >= 3 && rng.random_bool(0.2) { 3 } else { 2 };
        roots.shuffle(rng);
        let joined: Vec<usize> = roots.drain(..k).collect();
        let high = joined.iter().map(|&c| values[c]).fold(f64::MIN, f64::max);
        let node = values.len();
        values.push(high + rng.random_range(1..5) as f64);
        parent.push(node);
        for c in joined {
            parent[c] = node;
        }
        roots.push(node);
    }
    MergeTree::new(values, parent).expect("generated tree is valid")
}
