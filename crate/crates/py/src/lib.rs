//! Python bindings for the netrel reliability toolkit.
//!
//! Exposes the network type plus the main operations: exact enumeration,
//! exact-readout and sampled simulation, the verification sweep, gate-count
//! reports, and the closed-form resource calculator.
//!
//! ```python
//! import netrel_py
//!
//! net = netrel_py.Network(2, [(0, 1, 0.25)])
//! netrel_py.exact_reliability(net)                  # 0.75
//! netrel_py.simulate_reliability(net).value         # 0.75 via the simulator
//! netrel_py.sample_reliability(net, shots=10_000)   # sampled, with a CI
//! ```

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use netrel::estimator::{self, SweepConfig};
use netrel::graph::{self, Edge};
use netrel::resources;

fn value_error(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// An undirected graph with per-edge failure probabilities.
#[pyclass(name = "Network", module = "netrel_py", frozen)]
struct PyNetwork {
    inner: graph::Network,
}

#[pymethods]
impl PyNetwork {
    /// Builds a network from a node count and `(u, v, p_fail)` triples.
    /// Edge order is significant and preserved.
    #[new]
    fn new(num_nodes: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        let edges = edges
            .into_iter()
            .map(|(u, v, p_fail)| Edge::new(u, v, p_fail))
            .collect();
        Ok(PyNetwork {
            inner: graph::Network::new(num_nodes, edges).map_err(value_error)?,
        })
    }

    /// Parses the JSON graph document format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyNetwork {
            inner: graph::parse_network(text).map_err(value_error)?,
        })
    }

    #[getter]
    fn num_nodes(&self) -> usize {
        self.inner.num_nodes()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    /// The normalized edge list as `(u, v, p_fail)` triples.
    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .edges()
            .iter()
            .map(|edge| (edge.u, edge.v, edge.p_fail))
            .collect()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(num_nodes={}, num_edges={})",
            self.inner.num_nodes(),
            self.inner.num_edges()
        )
    }
}

/// A reliability value with its provenance.
#[pyclass(name = "ReliabilityEstimate", module = "netrel_py", frozen)]
struct PyReliabilityEstimate {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    shots: Option<u64>,
    #[pyo3(get)]
    ci_low: Option<f64>,
    #[pyo3(get)]
    ci_high: Option<f64>,
    #[pyo3(get)]
    seed: u64,
}

impl From<estimator::ReliabilityEstimate> for PyReliabilityEstimate {
    fn from(estimate: estimator::ReliabilityEstimate) -> Self {
        PyReliabilityEstimate {
            value: estimate.value,
            method: match estimate.method {
                estimator::Method::ExactReadout => "exact-readout".to_string(),
                estimator::Method::Sampled => "sampled".to_string(),
            },
            shots: estimate.shots,
            ci_low: estimate.ci_low,
            ci_high: estimate.ci_high,
            seed: estimate.seed,
        }
    }
}

#[pymethods]
impl PyReliabilityEstimate {
    fn __repr__(&self) -> String {
        match self.shots {
            Some(shots) => format!(
                "ReliabilityEstimate(value={}, method='{}', shots={shots})",
                self.value, self.method
            ),
            None => format!(
                "ReliabilityEstimate(value={}, method='{}')",
                self.value, self.method
            ),
        }
    }
}

/// Outcome of a randomized verification sweep.
#[pyclass(name = "SweepReport", module = "netrel_py", frozen)]
struct PySweepReport {
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    trials: usize,
    #[pyo3(get)]
    max_deviation: f64,
    #[pyo3(get)]
    reachability_failures: usize,
    json: String,
}

#[pymethods]
impl PySweepReport {
    /// The full report (per-trial records and summary) as JSON.
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "SweepReport(passed={}, trials={}, max_deviation={})",
            self.passed, self.trials, self.max_deviation
        )
    }
}

/// Closed-form gate and qubit counts for one problem size.
#[pyclass(name = "ResourceEstimate", module = "netrel_py", frozen)]
struct PyResourceEstimate {
    #[pyo3(get)]
    cnot_real: f64,
    #[pyo3(get)]
    cnot_int: u64,
    #[pyo3(get)]
    t_real: f64,
    #[pyo3(get)]
    t_int: u64,
    #[pyo3(get)]
    qubits: u64,
    json: String,
}

#[pymethods]
impl PyResourceEstimate {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "ResourceEstimate(cnot={}, t={}, qubits={})",
            self.cnot_real, self.t_real, self.qubits
        )
    }
}

fn resolve_terminals(net: &PyNetwork, terminals: Option<usize>) -> usize {
    terminals.unwrap_or_else(|| net.inner.num_nodes())
}

/// Exact reliability by exhaustive enumeration of edge configurations.
#[pyfunction]
#[pyo3(signature = (net, root = 0, terminals = None))]
fn exact_reliability(net: &PyNetwork, root: usize, terminals: Option<usize>) -> PyResult<f64> {
    graph::exact_reliability(&net.inner, root, resolve_terminals(net, terminals))
        .map_err(value_error)
}

/// Reliability read off the label-qubit marginal of one simulated run.
#[pyfunction]
#[pyo3(signature = (net, root = 0, terminals = None, seed = 0))]
fn simulate_reliability(
    net: &PyNetwork,
    root: usize,
    terminals: Option<usize>,
    seed: u64,
) -> PyResult<PyReliabilityEstimate> {
    estimator::quantum_reliability_exact_readout(
        &net.inner,
        root,
        resolve_terminals(net, terminals),
        seed,
    )
    .map(Into::into)
    .map_err(value_error)
}

/// Reliability estimated from label counts over repeated simulated shots,
/// with a 95% Wilson interval.
#[pyfunction]
#[pyo3(signature = (net, shots, root = 0, terminals = None, seed = 0))]
fn sample_reliability(
    net: &PyNetwork,
    shots: u64,
    root: usize,
    terminals: Option<usize>,
    seed: u64,
) -> PyResult<PyReliabilityEstimate> {
    estimator::quantum_reliability_sampled(
        &net.inner,
        root,
        resolve_terminals(net, terminals),
        shots,
        seed,
    )
    .map(Into::into)
    .map_err(value_error)
}

/// Cross-validates the simulator against the enumeration oracle on random
/// instances.
#[pyfunction]
#[pyo3(signature = (max_nodes = 5, max_edges = 7, trials = 100, tolerance = 1e-9, seed = 0))]
fn verify_sweep(
    max_nodes: usize,
    max_edges: usize,
    trials: usize,
    tolerance: f64,
    seed: u64,
) -> PyResult<PySweepReport> {
    let report = estimator::verify_sweep(&SweepConfig {
        max_nodes,
        max_edges,
        trials,
        tolerance,
        seed,
        ..SweepConfig::default()
    })
    .map_err(value_error)?;
    Ok(PySweepReport {
        passed: report.summary.passed,
        trials: report.summary.trials,
        max_deviation: report.summary.max_deviation,
        reachability_failures: report.summary.reachability_failures,
        json: serde_json::to_string(&report).map_err(value_error)?,
    })
}

/// Closed-form CNOT/T counts and qubit budget at a target accuracy.
#[pyfunction]
fn resource_estimate(
    edges: u64,
    nodes: u64,
    terminals: u64,
    epsilon: f64,
) -> PyResult<PyResourceEstimate> {
    let estimate =
        resources::resource_estimate(edges, nodes, terminals, epsilon).map_err(value_error)?;
    Ok(PyResourceEstimate {
        cnot_real: estimate.cnot_real,
        cnot_int: estimate.cnot_int,
        t_real: estimate.t_real,
        t_int: estimate.t_int,
        qubits: estimate.qubits,
        json: serde_json::to_string(&estimate).map_err(value_error)?,
    })
}

/// Gate tally of the full pipeline circuit, keyed by gate name.
#[pyfunction]
#[pyo3(signature = (net, root = 0, terminals = None))]
fn gate_counts(
    net: &PyNetwork,
    root: usize,
    terminals: Option<usize>,
) -> PyResult<BTreeMap<String, usize>> {
    let (circuit, _) =
        netrel::build_pipeline(&net.inner, root, resolve_terminals(net, terminals))
            .map_err(value_error)?;
    Ok(netrel::gate_count_report(&circuit)
        .into_iter()
        .map(|(kind, count)| (kind.name().to_string(), count))
        .collect())
}

/// Textual dump of the full pipeline circuit, one gate per line.
#[pyfunction]
#[pyo3(signature = (net, root = 0, terminals = None))]
fn circuit_dump(net: &PyNetwork, root: usize, terminals: Option<usize>) -> PyResult<String> {
    let (circuit, _) =
        netrel::build_pipeline(&net.inner, root, resolve_terminals(net, terminals))
            .map_err(value_error)?;
    Ok(circuit.dump())
}

/// Qubit budget for a problem size: edges + nodes + ancilla + label.
#[pyfunction]
fn qubit_count(edges: u64, nodes: u64) -> u64 {
    resources::qubit_count(edges, nodes)
}

#[pymodule]
fn netrel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyNetwork>()?;
    m.add_class::<PyReliabilityEstimate>()?;
    m.add_class::<PySweepReport>()?;
    m.add_class::<PyResourceEstimate>()?;
    m.add_function(wrap_pyfunction!(exact_reliability, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_reliability, m)?)?;
    m.add_function(wrap_pyfunction!(sample_reliability, m)?)?;
    m.add_function(wrap_pyfunction!(verify_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(resource_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(gate_counts, m)?)?;
    m.add_function(wrap_pyfunction!(circuit_dump, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_count, m)?)?;
    Ok(())
}
