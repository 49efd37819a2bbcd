//! Python bindings: `import spectral_lab`.
//!
//! Graphs cross the boundary as `BipartiteGraph` objects; reports come back
//! as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use lab::descent::{random_cubic_bipartite, DEFAULT_TIE_TOL};
use lab::enumeration::{certify_equivalence_records, certify_minimizer_records, TIE_TOL};
use lab::spectral::path_fiedler_closed_form;
use lab::{cache, graph, matchings};

fn err(e: lab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serde value -> Python object, via the stdlib json module.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "BipartiteGraph", module = "spectral_lab", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyBipartiteGraph {
    inner: graph::BipartiteGraph,
}

#[pymethods]
impl PyBipartiteGraph {
    /// Edges as `(u, v)` with `u` in `0..n_left` and `v` in `0..n_right`.
    #[new]
    fn new(n_left: usize, n_right: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = graph::BipartiteGraph::new(n_left, n_right, edges).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_graph6(text: &str) -> PyResult<Self> {
        Ok(Self { inner: graph::BipartiteGraph::from_graph6(text.trim()).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: graph::BipartiteGraph::from_json(text).map_err(err)? })
    }

    fn to_graph6(&self) -> String {
        self.inner.to_graph6()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n_left(&self) -> usize {
        self.inner.n_left()
    }

    #[getter]
    fn n_right(&self) -> usize {
        self.inner.n_right()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn is_cubic(&self) -> bool {
        self.inner.is_cubic()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn __repr__(&self) -> String {
        format!("BipartiteGraph({}, {}, {} edges)", self.inner.n_left(), self.inner.n_right(), self.inner.edge_count())
    }
}

#[pyclass(name = "SpectralResult", module = "spectral_lab", frozen, get_all)]
struct PySpectralResult {
    value: f64,
    vector: Vec<f64>,
    multiplicity: usize,
    residual: f64,
}

#[pymethods]
impl PySpectralResult {
    fn __repr__(&self) -> String {
        format!("SpectralResult(value={}, multiplicity={})", self.value, self.multiplicity)
    }
}

/// The extremal graph on `n + n` vertices (`n >= 6`).
#[pyfunction]
fn build_h2n(n: usize) -> PyResult<PyBipartiteGraph> {
    Ok(PyBipartiteGraph { inner: graph::build_h2n(n).map_err(err)? })
}

/// Uniform-ish random connected cubic bipartite graph, reproducible by seed.
#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn random_cubic(n: usize, seed: u64) -> PyResult<PyBipartiteGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(PyBipartiteGraph { inner: random_cubic_bipartite(n, &mut rng).map_err(err)? })
}

#[pyfunction]
fn algebraic_connectivity(py: Python<'_>, g: &PyBipartiteGraph) -> PyResult<PySpectralResult> {
    let s = py.detach(|| lab::algebraic_connectivity(&g.inner.to_graph())).map_err(err)?;
    Ok(PySpectralResult { value: s.value, vector: s.vector, multiplicity: s.multiplicity, residual: s.residual })
}

/// `2 - 2 cos(pi / n)`.
#[pyfunction]
fn path_connectivity(n: usize) -> PyResult<f64> {
    path_fiedler_closed_form(n).map_err(err)
}

/// Number of perfect matchings (permanent of the biadjacency matrix).
#[pyfunction]
fn perfect_matchings(py: Python<'_>, g: &PyBipartiteGraph) -> PyResult<u128> {
    py.detach(|| matchings::perfect_matchings(&g.inner)).map_err(err)
}

/// Greedy swap descent; returns `{"steps": [...], "terminal_reason": ...}`.
#[pyfunction]
#[pyo3(signature = (g, max_iter=1000, tolerance=DEFAULT_TIE_TOL))]
fn descend(py: Python<'_>, g: &PyBipartiteGraph, max_iter: usize, tolerance: f64) -> PyResult<Py<PyAny>> {
    let trace = py.detach(|| lab::descend(&g.inner, max_iter, tolerance)).map_err(err)?;
    to_py(py, &trace)
}

/// Every connected cubic bipartite class on `n + n` vertices (`3 <= n <= 8`)
/// with its `a(G)` and matching count. Uses `SPECTRAL_LAB_CACHE` when set.
#[pyfunction]
fn enumerate(py: Python<'_>, n: usize) -> PyResult<Py<PyAny>> {
    let records = py.detach(|| load_records(n))?;
    to_py(py, &records)
}

fn load_records(n: usize) -> PyResult<Vec<lab::EnumerationRecord>> {
    let c = cache::Cache::from_env().map_err(err)?;
    cache::cached_records(n, c.as_ref()).map_err(err)
}

/// Minimizer and matching-equivalence reports for order `n`.
#[pyfunction]
#[pyo3(signature = (n, tolerance=TIE_TOL))]
fn certify(py: Python<'_>, n: usize, tolerance: f64) -> PyResult<Py<PyAny>> {
    let records = py.detach(|| load_records(n))?;
    let minimizer = certify_minimizer_records(n, &records, tolerance).map_err(err)?;
    let equivalence = certify_equivalence_records(n, &records, tolerance).map_err(err)?;
    to_py(py, &serde_json::json!({ "minimizer": minimizer, "equivalence": equivalence }))
}

#[pymodule(name = "spectral_lab")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBipartiteGraph>()?;
    m.add_class::<PySpectralResult>()?;
    m.add_function(wrap_pyfunction!(build_h2n, m)?)?;
    m.add_function(wrap_pyfunction!(random_cubic, m)?)?;
    m.add_function(wrap_pyfunction!(algebraic_connectivity, m)?)?;
    m.add_function(wrap_pyfunction!(path_connectivity, m)?)?;
    m.add_function(wrap_pyfunction!(perfect_matchings, m)?)?;
    m.add_function(wrap_pyfunction!(descend, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    Ok(())
}
