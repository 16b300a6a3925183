//! Branching distance between tail-less merge trees.
//!
//! Two trees are `eps`-similar when some pair of their rooted tree
//! representations admits a root-to-root matching in which every matched
//! pair of branches costs at most `eps` ([`matching_cost`]) and every
//! removed branch costs at most `eps` ([`removal_cost`]). Removed branches
//! always form whole subtrees of the representation. The branching distance
//! is the least such `eps`.
//!
//! Every achievable cost is either a difference of two node values or half
//! the length of a branch, so the exact distance is found by bisection over
//! that finite candidate set.

mod baseline;
mod bipartite;
mod brute;
mod decomposition;
mod dp;

use std::fmt;
use std::str::FromStr;

pub use baseline::{is_eps_similar_baseline, representations_similar, BASELINE_MAX_LEAVES};
pub use brute::{brute_force_distance, cheapest_matching, BRUTE_FORCE_MAX_LEAVES};
pub use decomposition::{
    decomposition_count, enumerate_branch_decompositions, matching_cost, removal_cost, rooted_tree_representation,
    Branch, BranchDecomposition, RootedTreeRep,
};

use crate::error::{Error, Result};
use crate::merge_tree::MergeTree;

/// Which decision procedure answers `eps`-similarity queries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Engine {
    /// Table over (subtree, subtree) pairs; polynomial.
    #[default]
    Optimized,
    /// Enumerates all representation pairs; at most
    /// [`BASELINE_MAX_LEAVES`] leaves per tree.
    Baseline,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Optimized => "optimized",
            Engine::Baseline => "baseline",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimized" | "dp" => Ok(Engine::Optimized),
            "baseline" => Ok(Engine::Baseline),
            other => Err(Error::InvalidArgument(format!("unknown engine {other:?}"))),
        }
    }
}

/// How the minimal `eps` is searched for.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum DistanceMode {
    /// Bisection over the finite candidate set; returns the true minimum.
    #[default]
    Exact,
    /// Plain bisection on `[0, max candidate]` until the bracket is at most
    /// this wide; returns the upper end.
    Tolerance(f64),
}

/// A prepared pair of trees answering `eps`-similarity queries.
pub struct SimilarityOracle {
    inner: OracleImpl,
}

enum OracleImpl {
    Optimized(dp::DpEngine),
    Baseline(baseline::BaselineEngine),
}

impl SimilarityOracle {
    pub fn new(x: &MergeTree, y: &MergeTree, engine: Engine) -> Result<Self> {
        let inner = match engine {
            Engine::Optimized => OracleImpl::Optimized(dp::DpEngine::new(x, y)),
            Engine::Baseline => OracleImpl::Baseline(baseline::BaselineEngine::new(x, y)?),
        };
        Ok(Self { inner })
    }

    pub fn is_similar(&self, eps: f64) -> bool {
        match &self.inner {
            OracleImpl::Optimized(e) => e.is_similar(eps),
            OracleImpl::Baseline(e) => e.is_similar(eps),
        }
    }
}

/// Decides whether `x` and `y` can be matched within `eps`.
pub fn is_eps_similar(x: &MergeTree, y: &MergeTree, eps: f64, engine: Engine) -> Result<bool> {
    Ok(SimilarityOracle::new(x, y, engine)?.is_similar(eps))
}

/// Every value the branching distance can take for this pair, ascending and
/// deduplicated.
pub fn candidate_values(x: &MergeTree, y: &MergeTree) -> Vec<f64> {
    let all: Vec<f64> = x.values().iter().chain(y.values()).copied().collect();
    let mut out = Vec::with_capacity(all.len() * all.len());
    for (i, &a) in all.iter().enumerate() {
        for &b in &all[i..] {
            out.push((a - b).abs());
        }
    }
    for t in [x, y] {
        for m in t.leaves() {
            let mut s = m;
            loop {
                out.push(removal_cost(&Branch::from_values(t.value(m), t.value(s))));
                if s == t.root() {
                    break;
                }
                s = t.parent(s);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

pub fn branching_distance(x: &MergeTree, y: &MergeTree, mode: DistanceMode) -> Result<f64> {
    branching_distance_with(x, y, mode, Engine::default())
}

pub fn branching_distance_with(x: &MergeTree, y: &MergeTree, mode: DistanceMode, engine: Engine) -> Result<f64> {
    let oracle = SimilarityOracle::new(x, y, engine)?;
    let candidates = candidate_values(x, y);
    let top = *candidates.last().expect("candidate set always holds 0");
    match mode {
        DistanceMode::Exact => {
            // invariant: candidates[hi] is feasible, everything below lo is not
            let (mut lo, mut hi) = (0, candidates.len() - 1);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if oracle.is_similar(candidates[mid]) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            Ok(candidates[hi])
        }
        DistanceMode::Tolerance(delta) => {
            if delta.is_nan() || delta <= 0.0 {
                return Err(Error::InvalidArgument(format!("tolerance must be positive, got {delta}")));
            }
            if oracle.is_similar(0.0) {
                return Ok(0.0);
            }
            let (mut lo, mut hi) = (0.0, top);
            while hi - lo > delta {
                let mid = 0.5 * (lo + hi);
                if oracle.is_similar(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> MergeTree {
        let text = match name {
            "x" => include_str!("../../fixtures/triangle_x.json"),
            "y" => include_str!("../../fixtures/triangle_y.json"),
            "z" => include_str!("../../fixtures/triangle_z.json"),
            _ => unreachable!(),
        };
        MergeTree::from_json_str(text).unwrap()
    }

    fn both_engines(x: &MergeTree, y: &MergeTree, eps: f64) -> bool {
        let a = is_eps_similar(x, y, eps, Engine::Optimized).unwrap();
        let b = is_eps_similar(x, y, eps, Engine::Baseline).unwrap();
        assert_eq!(a, b, "engines disagree at eps = {eps}");
        a
    }

    #[test]
    fn identical_trees_similar_at_zero() {
        for t in [fixture("x"), fixture("y"), fixture("z"), MergeTree::trivial(1.0)] {
            assert!(both_engines(&t, &t, 0.0));
            assert_eq!(branching_distance(&t, &t, DistanceMode::Exact).unwrap(), 0.0);
        }
    }

    #[test]
    fn trivial_trees_at_zero_and_three() {
        let (a, b) = (MergeTree::trivial(0.0), MergeTree::trivial(3.0));
        assert!(!both_engines(&a, &b, 2.9));
        assert!(both_engines(&a, &b, 3.0));
        assert_eq!(branching_distance(&a, &b, DistanceMode::Exact).unwrap(), 3.0);
        assert_eq!(brute_force_distance(&a, &b).unwrap(), 3.0);
    }

    #[test]
    fn trivial_against_two_leaf_tree() {
        // the only root branch of the trivial tree must be matched; the
        // 2-leaf tree keeps one branch and removes the other
        let g = MergeTree::trivial(0.0);
        let h = MergeTree::new(vec![-7.5, 0.0, 5.5], vec![2, 2, 2]).unwrap();
        assert!(!both_engines(&g, &h, 6.4));
        assert!(both_engines(&g, &h, 6.5));
        assert_eq!(branching_distance(&g, &h, DistanceMode::Exact).unwrap(), 6.5);
        assert_eq!(brute_force_distance(&g, &h).unwrap(), 6.5);
    }

    #[test]
    fn triangle_inequality_counterexample() {
        let (x, y, z) = (fixture("x"), fixture("y"), fixture("z"));
        let d = |a: &MergeTree, b: &MergeTree| branching_distance(a, b, DistanceMode::Exact).unwrap();
        assert_eq!(d(&x, &y), 5.0);
        assert_eq!(d(&y, &z), 3.0);
        assert_eq!(d(&x, &z), 1.0);
        for (a, b, want) in [(&x, &y, 5.0), (&y, &z, 3.0), (&x, &z, 1.0)] {
            assert_eq!(brute_force_distance(a, b).unwrap(), want);
            assert_eq!(branching_distance_with(a, b, DistanceMode::Exact, Engine::Baseline).unwrap(), want);
        }
        assert!(d(&x, &y) > d(&x, &z) + d(&z, &y));
    }

    #[test]
    fn candidate_set_contents() {
        let c = candidate_values(&MergeTree::trivial(0.0), &MergeTree::trivial(3.0));
        assert_eq!(c, vec![0.0, 3.0]);
        let c = candidate_values(&fixture("x"), &MergeTree::trivial(0.0));
        // pairwise gaps of {5, 4, 10, 0} plus half-lengths 2.5 and 3
        assert_eq!(c, vec![0.0, 1.0, 2.5, 3.0, 4.0, 5.0, 6.0, 10.0]);
    }

    #[test]
    fn tolerance_mode_brackets_exact() {
        let (x, y) = (fixture("x"), fixture("y"));
        let exact = branching_distance(&x, &y, DistanceMode::Exact).unwrap();
        let approx = branching_distance(&x, &y, DistanceMode::Tolerance(1e-6)).unwrap();
        assert!(approx >= exact && approx - exact <= 1e-6);
        assert!(branching_distance(&x, &y, DistanceMode::Tolerance(0.0)).is_err());
    }

    #[test]
    fn baseline_size_guard() {
        let n = 13;
        let mut values: Vec<f64> = (0..n).map(|i| i as f64).collect();
        values.push(100.0);
        let big = MergeTree::new(values, vec![n; n + 1]).unwrap();
        assert!(matches!(
            is_eps_similar(&big, &big, 0.0, Engine::Baseline),
            Err(Error::SizeGuard { .. })
        ));
        assert!(is_eps_similar(&big, &big, 0.0, Engine::Optimized).unwrap());
        assert!(brute_force_distance(&big, &big).is_err());
    }
}
