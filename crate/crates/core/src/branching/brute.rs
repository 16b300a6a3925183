//! Exhaustive branching distance for small trees.
//!
//! Independent of the decision procedures: no epsilon, no candidate values
//! and no bipartite matching. Every pair of rooted tree representations is
//! built, and for each the cheapest admissible matching is found by trying
//! every partial injection between the children of each matched pair.
//! Subtrees below different matched pairs never interact, so the global
//! minimum of the maximum cost is assembled from the local minima.

use super::decomposition::{
    enumerate_branch_decompositions, matching_cost, rooted_tree_representation, RootedTreeRep,
};
use crate::error::{Error, Result};
use crate::merge_tree::MergeTree;

pub const BRUTE_FORCE_MAX_LEAVES: usize = 5;

pub fn brute_force_distance(x: &MergeTree, y: &MergeTree) -> Result<f64> {
    for t in [x, y] {
        if t.leaf_count() > BRUTE_FORCE_MAX_LEAVES {
            return Err(Error::SizeGuard {
                engine: "brute force",
                leaves: t.leaf_count(),
                limit: BRUTE_FORCE_MAX_LEAVES,
            });
        }
    }
    let reps = |t: &MergeTree| -> Result<Vec<RootedTreeRep>> {
        Ok(enumerate_branch_decompositions(t, BRUTE_FORCE_MAX_LEAVES)?
            .iter()
            .map(rooted_tree_representation)
            .collect())
    };
    let (rx, ry) = (reps(x)?, reps(y)?);
    let mut best = f64::INFINITY;
    for a in &rx {
        for b in &ry {
            best = best.min(cheapest_matching(a, b));
        }
    }
    Ok(best)
}

/// Minimum over admissible matchings of the largest cost incurred.
pub fn cheapest_matching(rx: &RootedTreeRep, ry: &RootedTreeRep) -> f64 {
    let rem_x = rx.subtree_removal_costs();
    let rem_y = ry.subtree_removal_costs();
    pair_cost(rx, ry, &rem_x, &rem_y, rx.root, ry.root)
}

fn pair_cost(rx: &RootedTreeRep, ry: &RootedTreeRep, rem_x: &[f64], rem_y: &[f64], u: usize, v: usize) -> f64 {
    let own = matching_cost(&rx.branches[u], &ry.branches[v]);
    let (cu, cv) = (&rx.children[u], &ry.children[v]);
    let mut used = vec![false; cv.len()];
    let inner = best_injection(rx, ry, rem_x, rem_y, cu, cv, 0, &mut used, 0.0);
    own.max(inner)
}

#[allow(clippy::too_many_arguments)]
fn best_injection(
    rx: &RootedTreeRep,
    ry: &RootedTreeRep,
    rem_x: &[f64],
    rem_y: &[f64],
    cu: &[usize],
    cv: &[usize],
    i: usize,
    used: &mut Vec<bool>,
    so_far: f64,
) -> f64 {
    if i == cu.len() {
        // every right child left over is removed
        return cv
            .iter()
            .zip(used.iter())
            .filter(|(_, &u)| !u)
            .fold(so_far, |acc, (&c, _)| acc.max(rem_y[c]));
    }
    // remove cu[i] with its subtree
    let mut best = best_injection(rx, ry, rem_x, rem_y, cu, cv, i + 1, used, so_far.max(rem_x[cu[i]]));
    for j in 0..cv.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        let matched = pair_cost(rx, ry, rem_x, rem_y, cu[i], cv[j]);
        best = best.min(best_injection(rx, ry, rem_x, rem_y, cu, cv, i + 1, used, so_far.max(matched)));
        used[j] = false;
    }
    best
}
