//! Regression fixtures and randomized checks replayed by `abd-kit verify`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;

use crate::abd::{average_branching_distance, AbdConfig};
use crate::branching::{
    branching_distance, branching_distance_with, brute_force_distance, DistanceMode, Engine,
};
use crate::error::{Error, Result};
use crate::graph_io::{is_isomorphic, EmbeddedGraph};
use crate::merge_tree::{compute_merge_tree, merge_tree_oracle, MergeTree};
use crate::synth;

pub const DEFAULT_TRIALS: usize = 200;
pub const STABILITY_THRESHOLD: f64 = 0.15;
pub const STABILITY_FLOOR: f64 = 1e-9;
/// Points per smooth test curve; per-pair ratios stop changing from about 96 on.
pub const SMOOTH_SAMPLES: usize = 200;

const EMBEDDED: [(&str, &str); 8] = [
    ("triangle_x.json", include_str!("../fixtures/triangle_x.json")),
    ("triangle_y.json", include_str!("../fixtures/triangle_y.json")),
    ("triangle_z.json", include_str!("../fixtures/triangle_z.json")),
    ("abd_g.json", include_str!("../fixtures/abd_g.json")),
    ("abd_h.json", include_str!("../fixtures/abd_h.json")),
    ("abd_j.json", include_str!("../fixtures/abd_j.json")),
    ("convex_triangle.json", include_str!("../fixtures/convex_triangle.json")),
    ("convex_square.json", include_str!("../fixtures/convex_square.json")),
];

/// The counterexample fixtures, parsed.
#[derive(Clone, Debug)]
pub struct Fixtures {
    pub trees: [MergeTree; 3],
    pub graphs: [EmbeddedGraph; 3],
    pub convex: [EmbeddedGraph; 2],
}

impl Fixtures {
    pub fn embedded() -> Result<Self> {
        Self::parse(|name| {
            EMBEDDED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| Error::InvalidArgument(format!("no embedded fixture {name}")))
        })
    }

    /// Reads the same file names from `dir`.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        Self::parse(|name| {
            let path: PathBuf = dir.join(name);
            fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
        })
    }

    fn parse(read: impl Fn(&str) -> Result<String>) -> Result<Self> {
        let tree = |name: &str| -> Result<MergeTree> {
            MergeTree::from_json_str(&read(name)?).map_err(|e| in_file(name, e))
        };
        let graph = |name: &str| -> Result<EmbeddedGraph> {
            EmbeddedGraph::from_json_str(&read(name)?).map_err(|e| in_file(name, e))
        };
        Ok(Self {
            trees: [tree("triangle_x.json")?, tree("triangle_y.json")?, tree("triangle_z.json")?],
            graphs: [graph("abd_g.json")?, graph("abd_h.json")?, graph("abd_j.json")?],
            convex: [graph("convex_triangle.json")?, graph("convex_square.json")?],
        })
    }
}

fn in_file(name: &str, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{name}: {msg}")),
        Error::InvalidTree(msg) => Error::InvalidTree(format!("{name}: {msg}")),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.to_string(), passed, detail });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        if failed == 0 {
            write!(f, "all {} checks passed", self.checks.len())
        } else {
            write!(f, "{failed} of {} checks failed", self.checks.len())
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub fixtures: Option<PathBuf>,
    pub stability_pairs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { trials: DEFAULT_TRIALS, seed: synth::DEFAULT_SEED, fixtures: None, stability_pairs: 10 }
    }
}

/// Runs every check. Fixture loading errors are returned, check failures
/// are reported.
pub fn run(opts: &VerifyOptions) -> Result<Report> {
    let fx = match &opts.fixtures {
        Some(dir) => Fixtures::from_dir(dir)?,
        None => Fixtures::embedded()?,
    };
    let mut report = Report::default();
    triangle_violation(&fx, &mut report)?;
    abd_violation(&fx, &mut report)?;
    convex_positiveness(&fx, &mut report)?;

    let mut rng = synth::rng(opts.seed);
    let mismatches = merge_tree_mismatches(&mut rng, opts.trials)?;
    report.push(
        "merge tree oracle",
        mismatches == 0,
        format!("{mismatches} mismatches in {} random graphs", opts.trials),
    );
    let pairs = random_tree_pairs(&mut rng, opts.trials, 5);
    let mut brute = 0;
    let mut tol = 0;
    let mut engines = 0;
    for (x, y) in &pairs {
        let exact = branching_distance(x, y, DistanceMode::Exact)?;
        if exact != brute_force_distance(x, y)? {
            brute += 1;
        }
        if (branching_distance(x, y, DistanceMode::Tolerance(1e-6))? - exact).abs() > 1e-6 {
            tol += 1;
        }
        if branching_distance_with(x, y, DistanceMode::Exact, Engine::Baseline)? != exact {
            engines += 1;
        }
    }
    report.push("exact vs brute force", brute == 0, format!("{brute} mismatches in {} pairs", pairs.len()));
    report.push("tolerance mode", tol == 0, format!("{tol} pairs off by more than 1e-6"));
    report.push("optimized vs baseline", engines == 0, format!("{engines} disagreements"));
    let violations = semi_metric_violations(&mut rng, opts.trials)?;
    report.push(
        "semi-metric properties",
        violations.is_empty(),
        if violations.is_empty() {
            format!("{} pairs", opts.trials)
        } else {
            violations.join("; ")
        },
    );
    let st = frame_stability(opts.stability_pairs, opts.seed)?;
    let needed = (opts.stability_pairs * 8).div_ceil(10);
    let mut detail = format!("{}/{} pairs within {STABILITY_THRESHOLD}", st.within(), st.ratios.len());
    for (i, r) in st.ratios.iter().enumerate().filter(|(_, r)| **r > STABILITY_THRESHOLD) {
        detail.push_str(&format!("; pair {i} ratio {r:.4}"));
    }
    report.push("frame stability 20 vs 100", st.within() >= needed, detail);
    Ok(report)
}

fn triangle_violation(fx: &Fixtures, report: &mut Report) -> Result<()> {
    let [x, y, z] = &fx.trees;
    let xy = branching_distance(x, y, DistanceMode::Exact)?;
    let yz = branching_distance(y, z, DistanceMode::Exact)?;
    let xz = branching_distance(x, z, DistanceMode::Exact)?;
    let ok = xy == 5.0 && yz == 3.0 && xz == 1.0 && xy > yz + xz;
    report.push("branching distance triangle", ok, format!("d(X,Y)={xy} d(Y,Z)={yz} d(X,Z)={xz}"));
    Ok(())
}

fn abd_violation(fx: &Fixtures, report: &mut Report) -> Result<()> {
    let cfg = AbdConfig { frames: 1, ..AbdConfig::default() };
    let [g, h, j] = &fx.graphs;
    let gh = average_branching_distance(g, h, &cfg)?;
    let gj = average_branching_distance(g, j, &cfg)?;
    let hj = average_branching_distance(h, j, &cfg)?;
    let ok = gh == 6.5 && gj == 2.5 && hj == 3.0 && gh > gj + hj;
    report.push("average distance triangle", ok, format!("d(G,H)={gh} d(G,J)={gj} d(H,J)={hj}"));
    Ok(())
}

fn convex_positiveness(fx: &Fixtures, report: &mut Report) -> Result<()> {
    let [a, b] = &fx.convex;
    let d = average_branching_distance(a, b, &AbdConfig::default())?;
    let iso = is_isomorphic(a, b);
    report.push(
        "average distance positiveness",
        d == 0.0 && !iso,
        format!("d={d} at 10 frames, isomorphic={iso}"),
    );
    Ok(())
}

/// Random connected graphs with at most 20 vertices on which the sweep and
/// the definition-based construction disagree.
pub fn merge_tree_mismatches<R: Rng>(rng: &mut R, trials: usize) -> Result<usize> {
    let mut bad = 0;
    for _ in 0..trials {
        let n = rng.random_range(1..=20);
        let sg = synth::random_scalar_graph(rng, n);
        if !compute_merge_tree(&sg)?.is_isomorphic_to(&merge_tree_oracle(&sg)?) {
            bad += 1;
        }
    }
    Ok(bad)
}

pub fn random_tree_pairs<R: Rng>(rng: &mut R, count: usize, max_leaves: usize) -> Vec<(MergeTree, MergeTree)> {
    (0..count)
        .map(|_| (synth::random_merge_tree(rng, max_leaves), synth::random_merge_tree(rng, max_leaves)))
        .collect()
}

/// Moves one node's value by half of the room its neighbours leave, or by 1
/// when the move is unbounded (root upwards, leaf downwards).
pub fn perturb_one_node<R: Rng>(rng: &mut R, t: &MergeTree) -> MergeTree {
    let node = rng.random_range(0..t.len());
    let mut values = t.values().to_vec();
    let v = values[node];
    let up = rng.random_bool(0.5);
    values[node] = if up {
        if node == t.root() { v + 1.0 } else { v + (t.value(t.parent(node)) - v) / 2.0 }
    } else {
        match t.children(node).iter().map(|&c| t.value(c)).reduce(f64::max) {
            Some(hi) => v - (v - hi) / 2.0,
            None => v - 1.0,
        }
    };
    t.with_values(values).expect("perturbation keeps the order")
}

/// Symmetry, zero self-distance and positivity under a single-node value
/// change on random tree pairs. Returns a description of each violation.
pub fn semi_metric_violations<R: Rng>(rng: &mut R, trials: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for i in 0..trials {
        let x = synth::random_merge_tree(rng, 5);
        let y = synth::random_merge_tree(rng, 5);
        let xy = branching_distance(&x, &y, DistanceMode::Exact)?;
        let yx = branching_distance(&y, &x, DistanceMode::Exact)?;
        if xy != yx {
            out.push(format!("pair {i}: d(X,Y)={xy} d(Y,X)={yx}"));
        }
        let xx = branching_distance(&x, &x, DistanceMode::Exact)?;
        if xx != 0.0 {
            out.push(format!("pair {i}: d(X,X)={xx}"));
        }
        let p = perturb_one_node(rng, &x);
        let xp = branching_distance(&x, &p, DistanceMode::Exact)?;
        if xp <= 0.0 {
            out.push(format!("pair {i}: perturbed distance {xp}"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameStability {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl FrameStability {
    pub fn within(&self) -> usize {
        self.ratios.iter().filter(|&&r| r <= STABILITY_THRESHOLD).count()
    }
}

/// Relative change of the average distance between 20 and 100 frames on
/// random pairs of smooth closed curves.
pub fn frame_stability(pairs: usize, seed: u64) -> Result<FrameStability> {
    let mut rng = synth::rng(seed ^ 0x5eed);
    let mut st = FrameStability { coarse: Vec::new(), fine: Vec::new(), ratios: Vec::new() };
    for _ in 0..pairs {
        let g = synth::random_smooth_shape(&mut rng, SMOOTH_SAMPLES);
        let h = synth::random_smooth_shape(&mut rng, SMOOTH_SAMPLES);
        let coarse = average_branching_distance(&g, &h, &AbdConfig { frames: 20, ..AbdConfig::default() })?;
        let fine = average_branching_distance(&g, &h, &AbdConfig { frames: 100, ..AbdConfig::default() })?;
        st.ratios.push((coarse - fine).abs() / fine.max(STABILITY_FLOOR));
        st.coarse.push(coarse);
        st.fine.push(fine);
    }
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixtures_parse() {
        let fx = Fixtures::embedded().unwrap();
        assert_eq!(fx.trees[0].leaf_count(), 2);
        assert_eq!(fx.graphs[2].vertex_count(), 5);
    }

    #[test]
    fn perturbation_is_valid_and_changes_one_value() {
        let mut r = synth::rng(4);
        for _ in 0..200 {
            let t = synth::random_merge_tree(&mut r, 5);
            let p = perturb_one_node(&mut r, &t);
            let changed = t.values().iter().zip(p.values()).filter(|(a, b)| a != b).count();
            assert_eq!(changed, 1);
        }
    }

    #[test]
    fn small_run_passes() {
        let opts = VerifyOptions { trials: 10, stability_pairs: 0, ..VerifyOptions::default() };
        let report = run(&opts).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn missing_fixture_dir_is_an_error() {
        let opts = VerifyOptions { fixtures: Some("/nonexistent/dir".into()), trials: 1, ..VerifyOptions::default() };
        assert!(run(&opts).is_err());
    }
}
