//! Polynomial decision procedure over (subtree, leaf) pairs.
//!
//! Cut a merge tree at the edge above node `c` (or above the root). The
//! branch leaving that cut starts at some leaf `m` below `c`, climbs to `c`
//! and ends at `c`'s parent (the root itself when `c` is the root). Its
//! children in the rooted tree representation are exactly the branches
//! leaving the other subtrees hanging off the path `m .. c`. All other
//! choices inside those hanging subtrees are independent, so whether two
//! cut subtrees can be matched within `eps` depends only on the pair of
//! subtrees, which gives a table over node pairs filled bottom-up.

use super::bipartite::covering_matching_exists;
use super::decomposition::{removal_cost, Branch};
use crate::merge_tree::MergeTree;

struct LeafChoice {
    min_value: f64,
    hanging: Vec<usize>,
}

struct CutTree {
    top_value: Vec<f64>,
    choices: Vec<Vec<LeafChoice>>,
    postorder: Vec<usize>,
    root: usize,
}

impl CutTree {
    fn new(mt: &MergeTree) -> Self {
        let n = mt.len();
        let root = mt.root();
        let top_value = (0..n)
            .map(|c| if c == root { mt.value(root) } else { mt.value(mt.parent(c)) })
            .collect();
        let mut choices: Vec<Vec<LeafChoice>> = (0..n).map(|_| Vec::new()).collect();
        for m in mt.leaves() {
            let min_value = mt.value(m);
            let mut hanging = Vec::new();
            let mut c = m;
            loop {
                choices[c].push(LeafChoice {
                    min_value,
                    hanging: hanging.clone(),
                });
                if c == root {
                    break;
                }
                let p = mt.parent(c);
                hanging.extend(mt.children(p).iter().copied().filter(|&s| s != c));
                c = p;
            }
        }
        Self {
            top_value,
            choices,
            postorder: mt.postorder(),
            root,
        }
    }

    fn removable(&self, eps: f64) -> Vec<bool> {
        let mut ok = vec![false; self.top_value.len()];
        for &c in &self.postorder {
            ok[c] = self.choices[c].iter().any(|ch| {
                removal_cost(&Branch::from_values(ch.min_value, self.top_value[c])) <= eps
                    && ch.hanging.iter().all(|&h| ok[h])
            });
        }
        ok
    }
}

pub(crate) struct DpEngine {
    x: CutTree,
    y: CutTree,
}

impl DpEngine {
    pub(crate) fn new(x: &MergeTree, y: &MergeTree) -> Self {
        Self {
            x: CutTree::new(x),
            y: CutTree::new(y),
        }
    }

    pub(crate) fn is_similar(&self, eps: f64) -> bool {
        let (x, y) = (&self.x, &self.y);
        let removable_x = x.removable(eps);
        let removable_y = y.removable(eps);
        let ny = y.top_value.len();
        let mut matchable = vec![false; x.top_value.len() * ny];
        for &cx in &x.postorder {
            for &cy in &y.postorder {
                if (x.top_value[cx] - y.top_value[cy]).abs() > eps {
                    continue;
                }
                matchable[cx * ny + cy] = x.choices[cx].iter().any(|chx| {
                    let lr: Vec<bool> = chx.hanging.iter().map(|&h| removable_x[h]).collect();
                    y.choices[cy].iter().any(|chy| {
                        if (chx.min_value - chy.min_value).abs() > eps {
                            return false;
                        }
                        let rr: Vec<bool> = chy.hanging.iter().map(|&h| removable_y[h]).collect();
                        covering_matching_exists(&lr, &rr, |i, j| {
                            matchable[chx.hanging[i] * ny + chy.hanging[j]]
                        })
                    })
                });
            }
        }
        matchable[x.root * ny + y.root]
    }
}
