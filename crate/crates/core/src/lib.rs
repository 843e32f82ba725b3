//! Network reliability of undirected probabilistic graphs.
//!
//! Each edge of a network fails independently with its own probability; the
//! reliability is the probability that the surviving subgraph still connects
//! at least a target number of nodes to a chosen root. This crate computes
//! that quantity three ways and cross-checks them:
//!
//! - [`graph`]: exhaustive enumeration over all `2^E` edge-failure
//!   configurations — the classical ground-truth oracle.
//! - [`circuit`] + [`simulator`]: a gate-level circuit that loads failure
//!   amplitudes onto edge qubits, runs a measurement-assisted reachability
//!   cascade over node qubits with a single reusable ancilla, flips a label
//!   qubit on the terminal condition, and is executed on a dense state-vector
//!   simulator with seeded mid-circuit measurements.
//! - [`estimator`]: exact label-marginal readout and shot sampling with
//!   Wilson intervals, plus a randomized cross-validation sweep against the
//!   oracle.
//!
//! [`resources`] is a standalone closed-form calculator for the CNOT/T gate
//! counts and qubit budget of a fault-tolerant compilation at a given target
//! accuracy.
//!
//! Everything is deterministic given explicit seeds.

pub mod circuit;
pub mod estimator;
pub mod graph;
pub mod resources;
pub mod simulator;

pub use circuit::{
    build_label, build_pipeline, build_pipeline_prefix, build_reachability, gate_count_report,
    Circuit, CircuitError, Gate, GateKind, QubitLayout,
};
pub use estimator::{
    quantum_reliability_exact_readout, quantum_reliability_sampled, verify_sweep, EstimatorError,
    Method, ProbabilityDraw, ReliabilityEstimate, SweepConfig, SweepReport,
};
pub use graph::{
    config_probability, exact_reliability, exact_reliability_with_cap, hop_distances,
    parse_network, reachable_count, sweep_reachability, Edge, EdgeConfig, GraphError, Network,
    DEFAULT_ENUMERATION_CAP,
};
pub use resources::{
    cnot_count, qubit_count, resource_estimate, t_count, ResourceError, ResourceEstimate,
};
pub use simulator::{
    apply_gate, derive_seed, marginal_probability, measure, run_circuit, sample_label,
    support_decomposition, ExecutionResult, SimulatorError, StateVector, SupportEntry,
};
