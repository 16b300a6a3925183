use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use abd_core::abd::{self, AbdConfig};
use abd_core::analysis::{self, DistanceMatrix};
use abd_core::branching::{self, DistanceMode, Engine};
use abd_core::filtration::{collapse_equal_adjacent, direction_filter, DEFAULT_COLLAPSE_TOL};
use abd_core::graph_io::{self, EmbeddedGraph, GraphFormat};
use abd_core::merge_tree::{compute_merge_tree, Centering};
use abd_core::verify;

fn py_err(e: abd_core::Error) -> PyErr {
    match e {
        abd_core::Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = abd_core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

fn mode(tol: Option<f64>) -> DistanceMode {
    tol.map_or(DistanceMode::Exact, DistanceMode::Tolerance)
}

fn config(frames: usize, avg: &str, tol: Option<f64>, engine: &str) -> PyResult<AbdConfig> {
    Ok(AbdConfig {
        frames,
        avg: parse::<Centering>(avg)?,
        mode: mode(tol),
        engine: parse::<Engine>(engine)?,
        ..AbdConfig::default()
    })
}

/// A plane graph with straight-line edges.
#[pyclass(name = "Graph", module = "abd_kit", frozen, from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: EmbeddedGraph,
}

#[pymethods]
impl PyGraph {
    /// Vertex `i` sits at `points[i]`; `edges` holds index pairs.
    #[new]
    fn new(points: Vec<(f64, f64)>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Self { inner: EmbeddedGraph::from_points(&points, &edges).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: EmbeddedGraph::from_json_str(text).map_err(py_err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    /// `(id, x, y)` triples.
    fn vertices(&self) -> Vec<(i64, f64, f64)> {
        self.inner.vertices().iter().map(|v| (v.id, v.x, v.y)).collect()
    }

    fn edges(&self) -> Vec<(i64, i64)> {
        self.inner.edges().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Graph(vertices={}, edges={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

/// A tail-less merge tree.
#[pyclass(name = "MergeTree", module = "abd_kit", frozen)]
struct PyMergeTree {
    inner: abd_core::MergeTree,
}

#[pymethods]
impl PyMergeTree {
    /// `parent[i] == i` marks the root.
    #[new]
    fn new(values: Vec<f64>, parent: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: abd_core::MergeTree::new(values, parent).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: abd_core::MergeTree::from_json_str(text).map_err(py_err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    #[getter]
    fn parent(&self) -> Vec<usize> {
        (0..self.inner.len()).map(|i| self.inner.parent(i)).collect()
    }

    #[getter]
    fn root(&self) -> usize {
        self.inner.root()
    }

    #[getter]
    fn leaf_count(&self) -> usize {
        self.inner.leaf_count()
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("MergeTree(nodes={}, leaves={})", self.inner.len(), self.inner.leaf_count())
    }
}

#[pyfunction]
#[pyo3(signature = (path, format = None))]
fn load_graph(path: PathBuf, format: Option<&str>) -> PyResult<PyGraph> {
    let format = match format {
        Some(f) => parse::<GraphFormat>(f)?,
        None if path.extension().is_some_and(|e| e != "json") => GraphFormat::EdgeList,
        None => GraphFormat::Json,
    };
    Ok(PyGraph { inner: graph_io::load_graph(&path, format).map_err(py_err)? })
}

/// Merge tree of the height along `angle`, without centring.
#[pyfunction]
#[pyo3(signature = (graph, angle = std::f64::consts::FRAC_PI_2))]
fn merge_tree(graph: &PyGraph, angle: f64) -> PyResult<PyMergeTree> {
    let g = abd::connected_part(&graph.inner).map_err(py_err)?;
    let sg = collapse_equal_adjacent(&direction_filter(&g, angle), DEFAULT_COLLAPSE_TOL);
    Ok(PyMergeTree { inner: compute_merge_tree(&sg).map_err(py_err)? })
}

#[pyfunction]
#[pyo3(signature = (x, y, tol = None, engine = "optimized"))]
fn branching_distance(x: &PyMergeTree, y: &PyMergeTree, tol: Option<f64>, engine: &str) -> PyResult<f64> {
    branching::branching_distance_with(&x.inner, &y.inner, mode(tol), parse(engine)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (g, h, frames = 10, avg = "median", tol = None, engine = "optimized"))]
fn average_branching_distance(
    g: &PyGraph,
    h: &PyGraph,
    frames: usize,
    avg: &str,
    tol: Option<f64>,
    engine: &str,
) -> PyResult<f64> {
    let cfg = config(frames, avg, tol, engine)?;
    abd::average_branching_distance(&g.inner, &h.inner, &cfg).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (graphs, labels = None, frames = 10, avg = "median", tol = None, jobs = None))]
fn distance_matrix(
    py: Python<'_>,
    graphs: Vec<PyGraph>,
    labels: Option<Vec<String>>,
    frames: usize,
    avg: &str,
    tol: Option<f64>,
    jobs: Option<usize>,
) -> PyResult<Vec<Vec<f64>>> {
    let cfg = config(frames, avg, tol, "optimized")?;
    let labels = labels.unwrap_or_else(|| (0..graphs.len()).map(|i| i.to_string()).collect());
    let graphs: Vec<EmbeddedGraph> = graphs.into_iter().map(|g| g.inner).collect();
    let m = py
        .detach(|| analysis::distance_matrix(&labels, &graphs, &cfg, jobs))
        .map_err(py_err)?;
    Ok(m.rows())
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<DistanceMatrix> {
    let labels = (0..rows.len()).map(|i| i.to_string()).collect();
    DistanceMatrix::from_rows(labels, rows).map_err(py_err)
}

/// Merge steps `(a, b, height, size)`; step `k` creates cluster `n + k`.
#[pyfunction]
fn single_linkage(rows: Vec<Vec<f64>>) -> PyResult<Vec<(usize, usize, f64, usize)>> {
    let d = analysis::single_linkage(&matrix(rows)?);
    Ok(d.steps.iter().map(|s| (s.a, s.b, s.height, s.size)).collect())
}

#[pyfunction]
fn cut_clusters(rows: Vec<Vec<f64>>, k: usize) -> PyResult<Vec<usize>> {
    analysis::cut_clusters(&analysis::single_linkage(&matrix(rows)?), k).map_err(py_err)
}

/// Coordinates (one row per item) and the number of clamped eigenvalues.
#[pyfunction]
#[pyo3(signature = (rows, dims = 2))]
fn classical_mds(rows: Vec<Vec<f64>>, dims: usize) -> PyResult<(Vec<Vec<f64>>, usize)> {
    let e = analysis::classical_mds(&matrix(rows)?, dims).map_err(py_err)?;
    Ok((e.coords, e.negative_eigenvalues))
}

/// Runs the regression and property checks; returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (trials = verify::DEFAULT_TRIALS))]
fn run_verify(py: Python<'_>, trials: usize) -> PyResult<(bool, String)> {
    let opts = verify::VerifyOptions { trials, ..verify::VerifyOptions::default() };
    let report = py.detach(|| verify::run(&opts)).map_err(py_err)?;
    Ok((report.passed(), report.to_string()))
}

#[pymodule]
fn abd_kit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyMergeTree>()?;
    m.add_function(wrap_pyfunction!(load_graph, m)?)?;
    m.add_function(wrap_pyfunction!(merge_tree, m)?)?;
    m.add_function(wrap_pyfunction!(branching_distance, m)?)?;
    m.add_function(wrap_pyfunction!(average_branching_distance, m)?)?;
    m.add_function(wrap_pyfunction!(distance_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(single_linkage, m)?)?;
    m.add_function(wrap_pyfunction!(cut_clusters, m)?)?;
    m.add_function(wrap_pyfunction!(classical_mds, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
