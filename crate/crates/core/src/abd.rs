//! Average branching distance between embedded graphs.
//!
//! Both graphs are rotated together through a fixed set of frames. At every
//! frame each graph's height function yields a merge tree, centred so that
//! its node values have median (or mean) zero, and the two trees are
//! compared with the branching distance. The per-frame distances are then
//! averaged.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::branching::{branching_distance_with, DistanceMode, Engine};
use crate::error::{Error, Result};
use crate::filtration::{collapse_equal_adjacent, direction_filter, DEFAULT_COLLAPSE_TOL};
use crate::graph_io::{largest_component, EmbeddedGraph};
use crate::merge_tree::{center_of, compute_merge_tree, shift_median_zero, Centering, MergeTree};

/// Evenly spaced directions starting at pi/2, wrapped into `[0, 2pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSet {
    angles: Vec<f64>,
}

impl FrameSet {
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

pub fn frame_angles(n: usize) -> Result<FrameSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("frame count must be at least 1".into()));
    }
    let angles = (0..n)
        .map(|i| (FRAC_PI_2 + TAU * i as f64 / n as f64).rem_euclid(TAU))
        .collect();
    Ok(FrameSet { angles })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbdConfig {
    pub frames: usize,
    /// How per-frame distances are combined.
    pub avg: Centering,
    /// How each merge tree is centred before comparison.
    pub centering: Centering,
    pub mode: DistanceMode,
    pub engine: Engine,
    pub collapse_tol: f64,
}

impl Default for AbdConfig {
    fn default() -> Self {
        Self {
            frames: 10,
            avg: Centering::Median,
            centering: Centering::Median,
            mode: DistanceMode::Exact,
            engine: Engine::Optimized,
            collapse_tol: DEFAULT_COLLAPSE_TOL,
        }
    }
}

/// Centred merge tree of `g` (assumed connected) seen along `angle`.
pub fn frame_tree(g: &EmbeddedGraph, angle: f64, cfg: &AbdConfig) -> Result<MergeTree> {
    let sg = collapse_equal_adjacent(&direction_filter(g, angle), cfg.collapse_tol);
    Ok(shift_median_zero(&compute_merge_tree(&sg)?, cfg.centering))
}

/// Reduces to the largest component, logging when something is dropped.
pub fn connected_part(g: &EmbeddedGraph) -> Result<EmbeddedGraph> {
    let lc = largest_component(g)?;
    if lc.vertex_count() != g.vertex_count() {
        log::warn!(
            "graph is disconnected; keeping the largest component ({} of {} vertices)",
            lc.vertex_count(),
            g.vertex_count()
        );
    }
    Ok(lc)
}

/// Centred merge trees of a graph at every frame.
pub fn frame_trees(g: &EmbeddedGraph, cfg: &AbdConfig) -> Result<Vec<MergeTree>> {
    let g = connected_part(g)?;
    frame_angles(cfg.frames)?
        .angles()
        .iter()
        .map(|&w| frame_tree(&g, w, cfg))
        .collect()
}

/// Sorts the per-frame values, then takes their median or mean, so the
/// result does not depend on evaluation order.
pub fn aggregate(per_frame: &[f64], avg: Centering) -> f64 {
    let mut sorted = per_frame.to_vec();
    sorted.sort_by(f64::total_cmp);
    center_of(&sorted, avg)
}

/// Branching distances between two stacks of per-frame trees.
pub fn distances_between(a: &[MergeTree], b: &[MergeTree], cfg: &AbdConfig) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "frame counts differ ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| branching_distance_with(x, y, cfg.mode, cfg.engine))
        .collect()
}

pub fn per_frame_distances(g: &EmbeddedGraph, h: &EmbeddedGraph, cfg: &AbdConfig) -> Result<Vec<f64>> {
    distances_between(&frame_trees(g, cfg)?, &frame_trees(h, cfg)?, cfg)
}

pub fn average_branching_distance(g: &EmbeddedGraph, h: &EmbeddedGraph, cfg: &AbdConfig) -> Result<f64> {
    Ok(aggregate(&per_frame_distances(g, h, cfg)?, cfg.avg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn graph(text: &str) -> EmbeddedGraph {
        EmbeddedGraph::from_json_str(text).unwrap()
    }

    #[test]
    fn frame_examples() {
        assert_eq!(frame_angles(1).unwrap().angles(), &[FRAC_PI_2]);
        let four = frame_angles(4).unwrap();
        let want = [FRAC_PI_2, PI, 3.0 * FRAC_PI_2, 0.0];
        for (a, b) in four.angles().iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let ten = frame_angles(10).unwrap();
        assert_eq!(ten.len(), 10);
        for w in 0..10 {
            let gap = (ten.angles()[(w + 1) % 10] - ten.angles()[w]).rem_euclid(TAU);
            assert!((gap - TAU / 10.0).abs() < 1e-12);
            assert!((0.0..TAU).contains(&ten.angles()[w]));
        }
        assert!(frame_angles(0).is_err());
    }

    #[test]
    fn self_distance_is_zero() {
        let h = graph(include_str!("../fixtures/abd_j.json"));
        for n in [1, 3, 10] {
            let cfg = AbdConfig { frames: n, ..Default::default() };
            assert_eq!(average_branching_distance(&h, &h, &cfg).unwrap(), 0.0);
        }
    }

    #[test]
    fn convex_polygons_are_indistinguishable() {
        let t = graph(include_str!("../fixtures/convex_triangle.json"));
        let s = graph(include_str!("../fixtures/convex_square.json"));
        for n in [1, 4, 10, 17] {
            let cfg = AbdConfig { frames: n, ..Default::default() };
            assert_eq!(average_branching_distance(&t, &s, &cfg).unwrap(), 0.0);
        }
    }

    #[test]
    fn abd_triangle_counterexample_single_frame() {
        let g = graph(include_str!("../fixtures/abd_g.json"));
        let h = graph(include_str!("../fixtures/abd_h.json"));
        let j = graph(include_str!("../fixtures/abd_j.json"));
        let cfg = AbdConfig { frames: 1, ..Default::default() };
        let d = |a, b| average_branching_distance(a, b, &cfg).unwrap();
        assert_eq!(d(&g, &h), 6.5);
        assert_eq!(d(&g, &j), 2.5);
        assert_eq!(d(&h, &j), 3.0);
        assert!(d(&g, &h) > d(&g, &j) + d(&j, &h));
    }

    #[test]
    fn mean_and_median_aggregation() {
        assert_eq!(aggregate(&[3.0, 1.0, 2.0, 10.0], Centering::Median), 2.5);
        assert_eq!(aggregate(&[3.0, 1.0, 2.0, 10.0], Centering::Mean), 4.0);
    }

    #[test]
    fn disconnected_input_uses_largest_component() {
        let g = graph(
            r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":1},{"id":2,"x":2,"y":0},
                            {"id":3,"x":9,"y":9}],"edges":[[0,1],[1,2]]}"#,
        );
        let trees = frame_trees(&g, &AbdConfig { frames: 1, ..Default::default() }).unwrap();
        assert_eq!(trees[0].leaf_count(), 2);
    }
}
