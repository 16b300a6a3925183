//! Reference decision procedure: enumerate every pair of rooted tree
//! representations and test each for an admissible matching.

use super::bipartite::covering_matching_exists;
use super::decomposition::{
    enumerate_branch_decompositions, matching_cost, rooted_tree_representation, RootedTreeRep,
};
use crate::error::Result;
use crate::merge_tree::MergeTree;

/// Leaf limit for the enumeration engine.
pub const BASELINE_MAX_LEAVES: usize = 12;

pub(crate) struct BaselineEngine {
    reps_x: Vec<RootedTreeRep>,
    reps_y: Vec<RootedTreeRep>,
}

impl BaselineEngine {
    pub(crate) fn new(x: &MergeTree, y: &MergeTree) -> Result<Self> {
        let reps = |t: &MergeTree| -> Result<Vec<RootedTreeRep>> {
            Ok(enumerate_branch_decompositions(t, BASELINE_MAX_LEAVES)?
                .iter()
                .map(rooted_tree_representation)
                .collect())
        };
        Ok(Self {
            reps_x: reps(x)?,
            reps_y: reps(y)?,
        })
    }

    pub(crate) fn is_similar(&self, eps: f64) -> bool {
        self.reps_x
            .iter()
            .any(|rx| self.reps_y.iter().any(|ry| representations_similar(rx, ry, eps)))
    }
}

/// Can the two representations be matched root to root with every matching
/// and removal cost at most `eps`?
pub fn representations_similar(rx: &RootedTreeRep, ry: &RootedTreeRep, eps: f64) -> bool {
    let removable_x: Vec<bool> = rx.subtree_removal_costs().iter().map(|&c| c <= eps).collect();
    let removable_y: Vec<bool> = ry.subtree_removal_costs().iter().map(|&c| c <= eps).collect();
    let ny = ry.len();
    let mut ok = vec![false; rx.len() * ny];
    let order_y = ry.postorder();
    for u in rx.postorder() {
        for &v in &order_y {
            if matching_cost(&rx.branches[u], &ry.branches[v]) > eps {
                continue;
            }
            let (cu, cv) = (&rx.children[u], &ry.children[v]);
            let lr: Vec<bool> = cu.iter().map(|&c| removable_x[c]).collect();
            let rr: Vec<bool> = cv.iter().map(|&c| removable_y[c]).collect();
            ok[u * ny + v] = covering_matching_exists(&lr, &rr, |i, j| ok[cu[i] * ny + cv[j]]);
        }
    }
    ok[rx.root * ny + ry.root]
}

pub fn is_eps_similar_baseline(x: &MergeTree, y: &MergeTree, eps: f64) -> Result<bool> {
    Ok(BaselineEngine::new(x, y)?.is_similar(eps))
}
