//! Tail-less merge trees of scalar graphs.
//!
//! A merge tree records how connected components of the sublevel sets
//! `f^-1((-inf, a])` are born at local minima and merge at saddles as `a`
//! grows. The tail-less variant stops at the last merge: its root is the
//! highest merge node, and a graph with a single minimum yields a one-node
//! tree holding the minimum value.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::ScalarGraph;

/// A tail-less merge tree. Node `i` has value `values[i]` and parent
/// `parent[i]`; the root is its own parent.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeTree {
    values: Vec<f64>,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    root: usize,
    source: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: i64,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct JsonTree {
    nodes: Vec<JsonNode>,
    parent: BTreeMap<i64, i64>,
}

impl MergeTree {
    /// Validates and builds a tree from per-node values and parent indices.
    pub fn new(values: Vec<f64>, parent: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidTree("no nodes".into()));
        }
        if parent.len() != n {
            return Err(Error::InvalidTree("parent list length differs from node count".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidTree(format!("node {i} has a non-finite value")));
        }
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i] == i).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidTree(format!("expected one root, found {}", roots.len())));
        }
        let root = roots[0];
        let mut children = vec![Vec::new(); n];
        for (i, &p) in parent.iter().enumerate() {
            if p >= n {
                return Err(Error::InvalidTree(format!("node {i} has out-of-range parent {p}")));
            }
            if p != i {
                if values[p] <= values[i] {
                    return Err(Error::InvalidTree(format!(
                        "node {i} (value {}) is not below its parent {p} (value {})",
                        values[i], values[p]
                    )));
                }
                children[p].push(i);
            }
        }
        // parent values strictly increase, so every upward walk terminates at the root
        for (i, c) in children.iter().enumerate() {
            if c.len() == 1 {
                return Err(Error::InvalidTree(format!("node {i} has a single child")));
            }
        }
        Ok(Self {
            values,
            parent,
            children,
            root,
            source: None,
        })
    }

    pub fn trivial(value: f64) -> Self {
        Self::new(vec![value], vec![0]).expect("single node is a valid tree")
    }

    fn with_source(mut self, source: Vec<i64>) -> Self {
        self.source = Some(source);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, node: usize) -> f64 {
        self.values[node]
    }

    pub fn parent(&self, node: usize) -> usize {
        self.parent[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Graph vertex that created each node, for trees built from a graph.
    pub fn source(&self) -> Option<&[i64]> {
        self.source.as_deref()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.len() == 1
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.children[node].is_empty()
    }

    /// Leaves in ascending node order; a trivial tree's only node is a leaf.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.children.iter().filter(|c| c.is_empty()).count()
    }

    /// Nodes in an order where every child precedes its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                out.push(node);
            } else {
                stack.push((node, true));
                for &c in self.children[node].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Same shape with every value shifted by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v += delta;
        }
        out
    }

    /// Same shape with new values; fails if the ordering constraints break.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        let mut out = Self::new(values, self.parent.clone())?;
        out.source = self.source.clone();
        Ok(out)
    }

    /// Canonical string of the rooted, valued shape, independent of node
    /// numbering. Equal strings mean a value-preserving isomorphism exists.
    pub fn canonical_form(&self) -> String {
        let mut memo: Vec<String> = vec![String::new(); self.len()];
        for node in self.postorder() {
            let mut kids: Vec<&str> = self.children[node].iter().map(|&c| memo[c].as_str()).collect();
            kids.sort_unstable();
            let v = if self.values[node] == 0.0 { 0.0 } else { self.values[node] };
            memo[node] = format!("({:016x}{})", v.to_bits(), kids.concat());
        }
        std::mem::take(&mut memo[self.root])
    }

    pub fn is_isomorphic_to(&self, other: &MergeTree) -> bool {
        self.len() == other.len() && self.canonical_form() == other.canonical_form()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: JsonTree = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let index: HashMap<i64, usize> = raw.nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
        if index.len() != raw.nodes.len() {
            return Err(Error::InvalidTree("duplicate node id".into()));
        }
        let mut parent = vec![usize::MAX; raw.nodes.len()];
        for (child, par) in &raw.parent {
            let c = *index
                .get(child)
                .ok_or_else(|| Error::InvalidTree(format!("parent entry for unknown node {child}")))?;
            let p = *index
                .get(par)
                .ok_or_else(|| Error::InvalidTree(format!("unknown parent {par} of node {child}")))?;
            parent[c] = p;
        }
        if let Some(i) = parent.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidTree(format!("node {} has no parent entry", raw.nodes[i].id)));
        }
        Self::new(raw.nodes.iter().map(|n| n.value).collect(), parent)
    }

    pub fn to_json_string(&self) -> String {
        let raw = JsonTree {
            nodes: self
                .values
                .iter()
                .enumerate()
                .map(|(i, &value)| JsonNode { id: i as i64, value })
                .collect(),
            parent: self.parent.iter().enumerate().map(|(i, &p)| (i as i64, p as i64)).collect(),
        };
        serde_json::to_string(&raw).expect("tree serialization is infallible")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }
}

fn check_sweep_input(sg: &ScalarGraph) -> Result<()> {
    if sg.is_empty() {
        return Err(Error::EmptyGraph);
    }
    for &(u, v) in sg.edges() {
        if sg.values()[u] == sg.values()[v] {
            return Err(Error::EqualAdjacentValues(sg.ids()[u], sg.ids()[v], sg.values()[u]));
        }
    }
    let comps = sg.component_count();
    if comps != 1 {
        return Err(Error::Disconnected(comps));
    }
    Ok(())
}

/// Sweep order: ascending value, ties broken by vertex id.
fn sweep_order(sg: &ScalarGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..sg.len()).collect();
    order.sort_by(|&a, &b| {
        sg.values()[a]
            .total_cmp(&sg.values()[b])
            .then(sg.ids()[a].cmp(&sg.ids()[b]))
    });
    order
}

/// Sweep construction of the merge tree.
///
/// Vertices are visited in ascending value order. Every graph vertex carries
/// a child pointer leading to its component's representative (the lowest
/// vertex of the component); every component also remembers the current
/// top of its part of the tree. A vertex with no lower neighbour starts a
/// leaf, one lower component is simply extended, and two or more lower
/// components are joined under a new node. Nodes created at the level of
/// the joining vertex are absorbed into the new node so that simultaneous
/// merges yield one node of higher arity.
pub fn compute_merge_tree(sg: &ScalarGraph) -> Result<MergeTree> {
    check_sweep_input(sg)?;
    let n = sg.len();
    let values = sg.values();
    let adj = sg.adjacency();

    let mut child = vec![usize::MAX; n];
    let mut top = vec![usize::MAX; n];
    let mut node_value: Vec<f64> = Vec::new();
    let mut node_parent: Vec<usize> = Vec::new();
    let mut node_source: Vec<i64> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();

    fn representative(child: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while child[r] != r {
            r = child[r];
        }
        let mut cur = v;
        while child[cur] != r {
            let next = child[cur];
            child[cur] = r;
            cur = next;
        }
        r
    }

    for v in sweep_order(sg) {
        let a = values[v];
        let mut reps: Vec<usize> = Vec::new();
        for &w in &adj[v] {
            if values[w] < a {
                let r = representative(&mut child, w);
                if !reps.contains(&r) {
                    reps.push(r);
                }
            }
        }
        match reps.len() {
            0 => {
                let node = node_value.len();
                node_value.push(a);
                node_parent.push(node);
                node_source.push(sg.ids()[v]);
                alive.push(true);
                child[v] = v;
                top[v] = node;
            }
            1 => child[v] = reps[0],
            _ => {
                let lowest = *reps
                    .iter()
                    .min_by(|&&x, &&y| values[x].total_cmp(&values[y]).then(sg.ids()[x].cmp(&sg.ids()[y])))
                    .unwrap();
                let node = node_value.len();
                node_value.push(a);
                node_parent.push(node);
                node_source.push(sg.ids()[v]);
                alive.push(true);
                for &r in &reps {
                    let sub = top[r];
                    if node_value[sub] == a {
                        // on-level node from an earlier vertex at this value: absorb it
                        alive[sub] = false;
                        for p in node_parent.iter_mut() {
                            if *p == sub {
                                *p = node;
                            }
                        }
                    } else {
                        node_parent[sub] = node;
                    }
                    child[r] = lowest;
                }
                child[v] = lowest;
                top[lowest] = node;
            }
        }
    }

    // compact away absorbed nodes
    let mut remap = vec![usize::MAX; node_value.len()];
    let mut kept = 0;
    for (i, &live) in alive.iter().enumerate() {
        if live {
            remap[i] = kept;
            kept += 1;
        }
    }
    let mut values_out = Vec::with_capacity(kept);
    let mut parent_out = Vec::with_capacity(kept);
    let mut source_out = Vec::with_capacity(kept);
    for i in 0..node_value.len() {
        if alive[i] {
            values_out.push(node_value[i]);
            parent_out.push(remap[node_parent[i]]);
            source_out.push(node_source[i]);
        }
    }
    Ok(MergeTree::new(values_out, parent_out)?.with_source(source_out))
}

/// Components of the subgraph induced by `members`, as vertex lists.
fn induced_components(adj: &[Vec<usize>], members: &[bool]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if !members[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &w in &adj[u] {
                if members[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Identified components: the set of minima of each component of the
/// sublevel set selected by `members`.
fn identified_components(adj: &[Vec<usize>], values: &[f64], members: &[bool]) -> BTreeSet<BTreeSet<usize>> {
    induced_components(adj, members)
        .into_iter()
        .map(|comp| {
            comp.iter()
                .copied()
                .filter(|&v| adj[v].iter().filter(|&&w| members[w]).all(|&w| values[v] <= values[w]))
                .collect()
        })
        .collect()
}

/// Merge tree computed directly from its set-theoretic definition.
///
/// For every distinct value `a` the closed and open sublevel sets are
/// traversed from scratch, their identified components compared, and each
/// newly appearing set of minima becomes a node joined to the open-level
/// sets it contains. Cubic time; meant as a test oracle.
pub fn merge_tree_oracle(sg: &ScalarGraph) -> Result<MergeTree> {
    check_sweep_input(sg)?;
    let values = sg.values();
    let adj = sg.adjacency();
    let mut levels: Vec<f64> = values.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut node_of: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut node_value = Vec::new();
    let mut node_parent: Vec<usize> = Vec::new();
    for &a in &levels {
        let closed: Vec<bool> = values.iter().map(|&v| v <= a).collect();
        let open: Vec<bool> = values.iter().map(|&v| v < a).collect();
        let gamma_closed = identified_components(&adj, values, &closed);
        let gamma_open = identified_components(&adj, values, &open);
        for set in gamma_closed.difference(&gamma_open) {
            let node = node_value.len();
            node_value.push(a);
            node_parent.push(node);
            for below in &gamma_open {
                if below.is_subset(set) && below != set {
                    let c = *node_of.get(below).ok_or_else(|| {
                        Error::InvalidTree(format!("open-level set {below:?} has no node"))
                    })?;
                    node_parent[c] = node;
                }
            }
            node_of.insert(set.clone(), node);
        }
    }
    MergeTree::new(node_value, node_parent)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Centering {
    #[default]
    Median,
    Mean,
}

impl FromStr for Centering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "median" => Ok(Centering::Median),
            "mean" => Ok(Centering::Mean),
            other => Err(Error::InvalidArgument(format!("unknown average {other:?}"))),
        }
    }
}

/// Median (midpoint of the central pair for even counts) or mean.
pub fn center_of(values: &[f64], mode: Centering) -> f64 {
    assert!(!values.is_empty(), "center of an empty set");
    match mode {
        Centering::Mean => values.iter().sum::<f64>() / values.len() as f64,
        Centering::Median => {
            let mut sorted = values.to_vec();
            sorted.sort_by(f64::total_cmp);
            let n = sorted.len();
            if n % 2 == 1 {
                sorted[n / 2]
            } else {
                (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
            }
        }
    }
}

/// Shifts all node values so that their median (or mean) is zero.
pub fn shift_median_zero(mt: &MergeTree, mode: Centering) -> MergeTree {
    let c = center_of(&mt.values, mode);
    let mut out = mt.clone();
    for v in &mut out.values {
        *v -= c;
    }
    out
}
