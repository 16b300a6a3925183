//! Branch decompositions and their rooted tree representations.

use crate::error::{Error, Result};
use crate::merge_tree::MergeTree;

/// A (minimum, saddle-or-root) pair of merge-tree nodes with their values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Branch {
    pub min: usize,
    pub top: usize,
    pub min_value: f64,
    pub top_value: f64,
}

impl Branch {
    pub fn from_values(min_value: f64, top_value: f64) -> Self {
        Self {
            min: 0,
            top: 0,
            min_value,
            top_value,
        }
    }

    /// Only trivial trees have a branch whose ends coincide.
    pub fn is_degenerate(&self) -> bool {
        self.min == self.top
    }
}

/// Cost of matching two branches: the larger endpoint discrepancy.
pub fn matching_cost(u: &Branch, v: &Branch) -> f64 {
    (u.min_value - v.min_value).abs().max((u.top_value - v.top_value).abs())
}

/// Cost of removing a branch: half its length.
pub fn removal_cost(u: &Branch) -> f64 {
    (u.min_value - u.top_value).abs() / 2.0
}

/// One way of cutting a merge tree into edge-disjoint descending paths.
///
/// Every internal node passes exactly one of its children's chains upward;
/// the chains of its other children end there. At the root the passed chain
/// becomes the designated root branch.
#[derive(Clone, Debug)]
pub struct BranchDecomposition {
    pub branches: Vec<Branch>,
    /// Node sequence of each branch, from its minimum up to its top.
    pub paths: Vec<Vec<usize>>,
    /// Index of the designated root branch.
    pub root_branch: usize,
}

impl BranchDecomposition {
    /// Decomposition induced by `pass[node]`, the child continuing through
    /// each internal node.
    fn from_choices(mt: &MergeTree, pass: &[usize]) -> Self {
        let root = mt.root();
        let mut branches = Vec::new();
        let mut paths = Vec::new();
        let mut root_branch = 0;
        for m in mt.leaves() {
            let mut path = vec![m];
            let mut x = m;
            let top = loop {
                if x == root {
                    root_branch = branches.len();
                    break root;
                }
                let p = mt.parent(x);
                path.push(p);
                if pass[p] == x {
                    x = p;
                } else {
                    break p;
                }
            };
            branches.push(Branch {
                min: m,
                top,
                min_value: mt.value(m),
                top_value: mt.value(top),
            });
            paths.push(path);
        }
        Self {
            branches,
            paths,
            root_branch,
        }
    }

    /// Every merge-tree edge as `(child, parent)`, grouped by branch.
    pub fn edges_by_branch(&self) -> Vec<Vec<(usize, usize)>> {
        self.paths
            .iter()
            .map(|p| p.windows(2).map(|w| (w[0], w[1])).collect())
            .collect()
    }

    /// The branches as `(min value, top value)` pairs, sorted; handy for
    /// comparing decompositions without caring about branch order.
    pub fn value_pairs(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self.branches.iter().map(|b| (b.min_value, b.top_value)).collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        out
    }
}

/// Number of branch decompositions: the product of the child counts of all
/// internal nodes.
pub fn decomposition_count(mt: &MergeTree) -> u128 {
    (0..mt.len())
        .map(|i| mt.children(i).len().max(1) as u128)
        .product()
}

/// All branch decompositions, each exactly once.
///
/// Order is lexicographic in the chosen child ids, taking internal nodes in
/// ascending id order with the lowest id most significant.
pub fn enumerate_branch_decompositions(mt: &MergeTree, max_leaves: usize) -> Result<Vec<BranchDecomposition>> {
    let leaves = mt.leaf_count();
    if leaves > max_leaves {
        return Err(Error::SizeGuard {
            engine: "decomposition enumeration",
            leaves,
            limit: max_leaves,
        });
    }
    let internal: Vec<usize> = (0..mt.len()).filter(|&i| !mt.is_leaf(i)).collect();
    let mut digits = vec![0usize; internal.len()];
    let mut pass = vec![usize::MAX; mt.len()];
    let mut out = Vec::new();
    loop {
        for (k, &node) in internal.iter().enumerate() {
            pass[node] = mt.children(node)[digits[k]];
        }
        out.push(BranchDecomposition::from_choices(mt, &pass));

        // odometer, last internal node varies fastest
        let mut k = internal.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < mt.children(internal[k]).len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Tree whose vertices are the branches of a decomposition.
///
/// A branch ending at saddle `s` hangs below the branch that passes through
/// `s`; branches ending at the root hang below the designated root branch.
/// For binary merge trees this coincides with joining two branches whenever
/// one's top lies on the other's path.
#[derive(Clone, Debug)]
pub struct RootedTreeRep {
    pub branches: Vec<Branch>,
    pub parent: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl RootedTreeRep {
    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.len() - 1
    }

    /// Vertices in an order where children precede parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                out.push(v);
            } else {
                stack.push((v, true));
                stack.extend(self.children[v].iter().map(|&c| (c, false)));
            }
        }
        out
    }

    /// Largest removal cost over each vertex's subtree.
    pub fn subtree_removal_costs(&self) -> Vec<f64> {
        let mut cost = vec![0.0f64; self.len()];
        for v in self.postorder() {
            let own = removal_cost(&self.branches[v]);
            cost[v] = self.children[v].iter().fold(own, |acc, &c| acc.max(cost[c]));
        }
        cost
    }
}

pub fn rooted_tree_representation(bd: &BranchDecomposition) -> RootedTreeRep {
    let n = bd.branches.len();
    // which branch passes through each node (as a non-top node)
    let mut through = std::collections::HashMap::new();
    for (b, path) in bd.paths.iter().enumerate() {
        for &node in &path[..path.len() - 1] {
            through.insert(node, b);
        }
    }
    let root_node = bd.branches[bd.root_branch].top;
    let mut parent = vec![usize::MAX; n];
    let mut children = vec![Vec::new(); n];
    for b in 0..n {
        if b == bd.root_branch {
            parent[b] = b;
            continue;
        }
        let top = bd.branches[b].top;
        let p = if top == root_node { bd.root_branch } else { through[&top] };
        parent[b] = p;
        children[p].push(b);
    }
    RootedTreeRep {
        branches: bd.branches.clone(),
        parent,
        children,
        root: bd.root_branch,
    }
}
