//! Python bindings: tournaments, witnesses, extensions and campaigns.

use eppa_core::format::{parse_graph, serialize_graph, tournament_to_dot, witness_to_dot, DEFAULT_DOT_BUDGET};
use eppa_core::verify::{
    enumerate_partial_automorphisms, find_extending_automorphism, run_campaign, verify_automorphism, verify_remark,
    CampaignConfig, InstanceSource, PhiSelection, RemarkOptions, DEFAULT_ORACLE_BUDGET,
};
use eppa_core::witness::DEFAULT_VERTEX_BUDGET;
use eppa_core::{
    build_witness_with, extend_automorphism, is_partial_automorphism, normalize, semigeneric_violation, witness_size,
    NormalizedTournament, PartialMap, PartiteDigraph, Tournament, Vertex, Witness, WitnessOptions,
};
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn partial_map(pairs: Vec<(Vertex, Vertex)>) -> PyResult<PartialMap> {
    PartialMap::from_pairs(pairs).map_err(value_error)
}

fn check_vertex(order: usize, v: Vertex) -> PyResult<()> {
    if v == 0 || v > order {
        return Err(PyIndexError::new_err(format!("vertex {v} outside 1..={order}")));
    }
    Ok(())
}

/// A finite n-partite tournament with vertices `1..=k`.
#[pyclass(name = "Tournament", module = "eppa", frozen, from_py_object)]
#[derive(Clone)]
struct PyTournament {
    inner: Tournament,
}

#[pymethods]
impl PyTournament {
    #[new]
    fn new(n: usize, part_of: Vec<usize>, edges: Vec<(Vertex, Vertex)>) -> PyResult<Self> {
        let inner = Tournament::new(n, part_of, edges).map_err(value_error)?;
        Ok(PyTournament { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = parse_graph(text).map_err(value_error)?;
        Ok(PyTournament { inner })
    }

    fn to_json(&self) -> String {
        serialize_graph(&self.inner)
    }

    fn to_dot(&self) -> String {
        tournament_to_dot(&self.inner)
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.part_count()
    }

    #[getter]
    fn part_of(&self) -> Vec<usize> {
        self.inner.vertices().map(|v| self.inner.part_of(v)).collect()
    }

    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.inner.arcs().collect()
    }

    fn has_arc(&self, x: Vertex, y: Vertex) -> PyResult<bool> {
        check_vertex(self.inner.order(), x)?;
        check_vertex(self.inner.order(), y)?;
        Ok(self.inner.has_arc(x, y))
    }

    fn is_semigeneric(&self) -> bool {
        semigeneric_violation(&self.inner).is_none()
    }

    /// `(parts, left, right, forward_arcs)` for the first violating
    /// quadruple, or `None`.
    #[allow(clippy::type_complexity)]
    fn semigeneric_violation(&self) -> Option<((usize, usize), (Vertex, Vertex), (Vertex, Vertex), usize)> {
        semigeneric_violation(&self.inner).map(|v| (v.parts, v.left, v.right, v.forward_arcs))
    }

    fn is_partial_automorphism(&self, pairs: Vec<(Vertex, Vertex)>) -> PyResult<bool> {
        Ok(is_partial_automorphism(&self.inner, &partial_map(pairs)?))
    }

    /// Every partial automorphism with at most `max_dom` domain vertices,
    /// as lists of pairs.
    #[pyo3(signature = (max_dom=None))]
    fn partial_automorphisms(&self, max_dom: Option<usize>) -> Vec<Vec<(Vertex, Vertex)>> {
        enumerate_partial_automorphisms(&self.inner, max_dom.unwrap_or(usize::MAX))
            .map(|p| p.iter().collect())
            .collect()
    }

    fn normalize(&self) -> PyNormalized {
        PyNormalized {
            inner: normalize(&self.inner),
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Tournament(k={}, n={})", self.inner.order(), self.inner.part_count())
    }
}

/// A tournament padded to equal contiguous parts.
#[pyclass(name = "NormalizedTournament", module = "eppa", frozen)]
struct PyNormalized {
    inner: NormalizedTournament,
}

#[pymethods]
impl PyNormalized {
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn part_size(&self) -> usize {
        self.inner.part_size()
    }

    /// `relabeling[v - 1]` is the new label of input vertex `v`.
    #[getter]
    fn relabeling(&self) -> Vec<Vertex> {
        self.inner.relabeling().to_vec()
    }

    fn is_padding(&self, v: Vertex) -> PyResult<bool> {
        check_vertex(self.inner.k(), v)?;
        Ok(self.inner.is_padding(v))
    }

    fn tournament(&self) -> PyTournament {
        PyTournament {
            inner: self.inner.tournament().clone(),
        }
    }
}

/// The EPPA witness of a tournament. Vertex ids run over `1..=order`.
#[pyclass(name = "Witness", module = "eppa", frozen)]
struct PyWitness {
    inner: Witness,
}

#[pymethods]
impl PyWitness {
    #[new]
    #[pyo3(signature = (tournament, vertex_budget=DEFAULT_VERTEX_BUDGET))]
    fn new(tournament: &PyTournament, vertex_budget: u64) -> PyResult<Self> {
        let options = WitnessOptions {
            vertex_budget,
            ..WitnessOptions::default()
        };
        let inner = build_witness_with(&normalize(&tournament.inner), &options).map_err(value_error)?;
        Ok(PyWitness { inner })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn part_size(&self) -> usize {
        self.inner.part_size()
    }

    fn has_arc(&self, u: Vertex, v: Vertex) -> PyResult<bool> {
        check_vertex(self.inner.order(), u)?;
        check_vertex(self.inner.order(), v)?;
        Ok(self.inner.has_arc(u, v))
    }

    fn part_of(&self, u: Vertex) -> PyResult<usize> {
        check_vertex(self.inner.order(), u)?;
        Ok(self.inner.part_of(u))
    }

    /// The witness vertex carrying vertex `v` of the input tournament.
    fn embed(&self, v: Vertex) -> PyResult<Vertex> {
        let source = self.inner.source();
        check_vertex(source.original_order(), v)?;
        Ok(self.inner.psi(source.relabel(v)))
    }

    /// The witness vertex carrying vertex `x` of the normalized tournament.
    fn psi(&self, x: Vertex) -> PyResult<Vertex> {
        check_vertex(self.inner.k(), x)?;
        Ok(self.inner.psi(x))
    }

    /// Base vertex (normalized label) of a witness vertex.
    fn project(&self, u: Vertex) -> PyResult<Vertex> {
        check_vertex(self.inner.order(), u)?;
        Ok(self.inner.project(u))
    }

    fn vertex_name(&self, u: Vertex) -> PyResult<String> {
        check_vertex(self.inner.order(), u)?;
        Ok(self.inner.vertex_name(u))
    }

    fn vertex_by_name(&self, name: &str) -> PyResult<Vertex> {
        self.inner
            .vertex_by_name(name)
            .ok_or_else(|| PyValueError::new_err(format!("no witness vertex named {name:?}")))
    }

    #[pyo3(signature = (budget=DEFAULT_DOT_BUDGET))]
    fn to_dot(&self, budget: usize) -> PyResult<String> {
        witness_to_dot(&self.inner, budget).map_err(value_error)
    }

    /// Extends a partial automorphism of the input tournament, given as
    /// pairs of its vertices. Returns the certificate as a dict.
    fn extend<'py>(&self, py: Python<'py>, pairs: Vec<(Vertex, Vertex)>) -> PyResult<Bound<'py, PyDict>> {
        let source = self.inner.source();
        let phi = partial_map(pairs)?;
        for (x, y) in phi.iter() {
            check_vertex(source.original_order(), x)?;
            check_vertex(source.original_order(), y)?;
        }
        let moved = phi.transport(|v| self.inner.psi(source.relabel(v)));
        let cert = extend_automorphism(&self.inner, &moved).map_err(value_error)?;
        let flips: Vec<((Vertex, Vertex), (bool, bool))> = cert.flips.flipped_pairs().collect();
        let out = PyDict::new(py);
        out.set_item("phi", moved.iter().collect::<Vec<_>>())?;
        out.set_item("iota_hat", cert.iota_hat.images().to_vec())?;
        out.set_item("phi_hat", cert.phi_hat.images().to_vec())?;
        out.set_item("flips", flips)?;
        out.set_item("theta", cert.theta)?;
        Ok(out)
    }

    /// Whether `theta` (`theta[u - 1]` the image of `u`) is an automorphism.
    fn is_automorphism(&self, theta: Vec<Vertex>) -> bool {
        verify_automorphism(&self.inner, &theta).is_ok()
    }

    /// Searches for an automorphism extending `pairs` of witness vertices,
    /// without using the construction.
    #[pyo3(signature = (pairs, budget=DEFAULT_ORACLE_BUDGET))]
    fn oracle_extension(&self, pairs: Vec<(Vertex, Vertex)>, budget: usize) -> PyResult<Option<Vec<Vertex>>> {
        find_extending_automorphism(&self.inner, &partial_map(pairs)?, budget).map_err(value_error)
    }

    /// Finds a copy of `small` whose partial automorphisms all extend and
    /// returns `(embedding, checked)`.
    fn serves(&self, small: &PyTournament) -> PyResult<(Vec<Vertex>, usize)> {
        let r = verify_remark(&self.inner, &small.inner, &RemarkOptions::default()).map_err(value_error)?;
        Ok((r.embedding, r.checked))
    }

    fn __repr__(&self) -> String {
        format!(
            "Witness(k={}, n={}, order={})",
            self.inner.k(),
            self.inner.n(),
            self.inner.order()
        )
    }
}

#[pyfunction(name = "witness_size")]
fn py_witness_size(k: usize, n: usize) -> PyResult<u128> {
    witness_size(k, n).map_err(value_error)
}

/// Runs a verification campaign and returns the report as a dict.
///
/// With `tournaments` the given instances are checked; otherwise every
/// normalized tournament on `n` parts up to `max_k` vertices, or `instances`
/// random ones on `max_k` vertices when `sample` is set.
#[pyfunction]
#[pyo3(signature = (
    tournaments=None, *, n=2, max_k=4, sample=None, instances=10, max_dom=None, seed=0,
    oracle=false, shuffled=0, jobs=None
))]
#[allow(clippy::too_many_arguments)]
fn campaign<'py>(
    py: Python<'py>,
    tournaments: Option<Vec<PyTournament>>,
    n: usize,
    max_k: usize,
    sample: Option<usize>,
    instances: usize,
    max_dom: Option<usize>,
    seed: u64,
    oracle: bool,
    shuffled: usize,
    jobs: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    if jobs == Some(0) {
        return Err(PyValueError::new_err("jobs must be positive"));
    }
    let max_dom = max_dom.unwrap_or(usize::MAX);
    let source = match (tournaments, sample) {
        (Some(ts), _) => InstanceSource::Given(ts.into_iter().map(|t| t.inner).collect()),
        (None, Some(_)) => InstanceSource::Sampled {
            n,
            k: max_k,
            count: instances,
        },
        (None, None) => InstanceSource::Exhaustive { n, min_k: n, max_k },
    };
    let phis = match sample {
        Some(count) => PhiSelection::Sampled { count, max_dom },
        None => PhiSelection::All { max_dom },
    };
    let config = CampaignConfig {
        instances: source,
        phis,
        seed,
        oracle,
        shuffled_completions: shuffled,
        jobs,
        ..CampaignConfig::default()
    };
    let json = py.detach(|| run_campaign(&config).to_json());
    py.import("json")?.call_method1("loads", (json,))
}

#[pymodule]
fn eppa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTournament>()?;
    m.add_class::<PyNormalized>()?;
    m.add_class::<PyWitness>()?;
    m.add_function(wrap_pyfunction!(py_witness_size, m)?)?;
    m.add_function(wrap_pyfunction!(campaign, m)?)?;
    Ok(())
}
