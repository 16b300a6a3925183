//! Pairwise distance matrices and what is built on them: single-linkage
//! dendrograms, classical MDS embeddings and their file exports.

mod export;
mod linkage;
mod mds;

pub use export::{dendrogram_svg, embedding_svg, export, newick, read_matrix_csv, render, Artifact, ExportKind};
pub use linkage::{cut_clusters, purity, single_linkage, Dendrogram, MergeStep};
pub use mds::{classical_mds, Embedding2D};

use rayon::prelude::*;

use crate::abd::{aggregate, distances_between, frame_trees, AbdConfig};
use crate::error::{Error, Result};
use crate::graph_io::EmbeddedGraph;

/// Symmetric matrix of pairwise distances with a label per row.
///
/// Symmetric with a zero diagonal and nonnegative entries. The triangle
/// inequality is not assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("matrix must be {n} x {n}")));
        }
        for i in 0..n {
            if rows[i][i] != 0.0 {
                return Err(Error::InvalidArgument(format!("diagonal entry {i} is not zero")));
            }
            for j in 0..n {
                let v = rows[i][j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidArgument(format!("entry ({i}, {j}) = {v} is not a distance")));
                }
                if v != rows[j][i] {
                    return Err(Error::InvalidArgument(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            labels,
            n,
            data: rows.concat(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }
}

/// Average branching distance between every pair of graphs.
///
/// Per-frame merge trees are built once per graph; each unordered pair is
/// then evaluated once. `jobs` bounds the worker count (`None` uses the
/// global pool). The result does not depend on scheduling.
pub fn distance_matrix(
    labels: &[String],
    graphs: &[EmbeddedGraph],
    cfg: &AbdConfig,
    jobs: Option<usize>,
) -> Result<DistanceMatrix> {
    if graphs.len() < 2 {
        return Err(Error::InvalidArgument("need at least two graphs".into()));
    }
    if labels.len() != graphs.len() {
        return Err(Error::InvalidArgument("one label per graph required".into()));
    }
    let run = || -> Result<Vec<Vec<f64>>> {
        let trees = graphs
            .par_iter()
            .map(|g| frame_trees(g, cfg))
            .collect::<Result<Vec<_>>>()?;
        let n = graphs.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let values = pairs
            .par_iter()
            .map(|&(i, j)| Ok(aggregate(&distances_between(&trees[i], &trees[j], cfg)?, cfg.avg)))
            .collect::<Result<Vec<f64>>>()?;
        let mut rows = vec![vec![0.0; n]; n];
        for (&(i, j), v) in pairs.iter().zip(values) {
            rows[i][j] = v;
            rows[j][i] = v;
        }
        Ok(rows)
    };
    let rows = match jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    DistanceMatrix::from_rows(labels.to_vec(), rows)
}
