//! End-to-end reliability pipelines and the oracle cross-validation sweep.
//!
//! Two estimation routes exist on top of the circuit simulator: reading the
//! label-qubit marginal straight off the final state (exact readout), and
//! counting label measurements over repeated shots (sampling, with a Wilson
//! score interval). [`verify_sweep`] cross-checks exact readout against the
//! brute-force enumeration oracle over randomly generated networks, and also
//! replays the reachability cascade pass by pass against its classical
//! analogue.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{build_pipeline, build_pipeline_prefix, CircuitError};
use crate::graph::{
    exact_reliability, hop_distances, sweep_reachability, Edge, GraphError, Network,
};
use crate::simulator::{
    derive_seed, marginal_probability, run_circuit, sample_label, support_decomposition,
    SimulatorError,
};

/// Largest state the estimators will simulate: `2^24` amplitudes (256 MiB).
pub const SIMULATOR_QUBIT_BUDGET: usize = 24;

/// z-score of the two-sided 95% confidence level.
const WILSON_Z: f64 = 1.959963984540054;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
    #[error("simulating this network needs {qubits} qubits, over the budget of {budget}")]
    QubitBudgetExceeded { qubits: usize, budget: usize },
    #[error("at least one shot is required")]
    ZeroShots,
}

impl EstimatorError {
    pub fn kind(&self) -> &'static str {
        match self {
            EstimatorError::Graph(e) => e.kind(),
            EstimatorError::Circuit(e) => e.kind(),
            EstimatorError::Simulator(e) => e.kind(),
            EstimatorError::QubitBudgetExceeded { .. } => "qubit-budget-exceeded",
            EstimatorError::ZeroShots => "zero-shots",
        }
    }
}

/// How a reliability value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "exact-readout")]
    ExactReadout,
    #[serde(rename = "sampled")]
    Sampled,
}

/// A reliability value with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct ReliabilityEstimate {
    pub value: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_high: Option<f64>,
    pub seed: u64,
}

fn check_budget(net: &Network) -> Result<(), EstimatorError> {
    let qubits = net.num_nodes() + net.num_edges() + 2;
    if qubits > SIMULATOR_QUBIT_BUDGET {
        return Err(EstimatorError::QubitBudgetExceeded {
            qubits,
            budget: SIMULATOR_QUBIT_BUDGET,
        });
    }
    Ok(())
}

/// Reliability from the label-qubit marginal of a single simulated run.
///
/// The marginal is an incoherent sum over edge configurations, so the value
/// is independent of the mid-circuit measurement outcomes and therefore of
/// `seed`; the seed only fixes which outcome branch the run collapses into.
pub fn quantum_reliability_exact_readout(
    net: &Network,
    root: usize,
    terminals: usize,
    seed: u64,
) -> Result<ReliabilityEstimate, EstimatorError> {
    check_budget(net)?;
    let (circuit, layout) = build_pipeline(net, root, terminals)?;
    let result = run_circuit(&circuit, seed)?;
    let value = marginal_probability(&result.state, layout.label_qubit(), true);
    Ok(ReliabilityEstimate {
        value,
        method: Method::ExactReadout,
        shots: None,
        ci_low: None,
        ci_high: None,
        seed,
    })
}

/// Reliability from label counts over `shots` independent runs, with a 95%
/// Wilson score interval.
pub fn quantum_reliability_sampled(
    net: &Network,
    root: usize,
    terminals: usize,
    shots: u64,
    seed: u64,
) -> Result<ReliabilityEstimate, EstimatorError> {
    if shots == 0 {
        return Err(EstimatorError::ZeroShots);
    }
    check_budget(net)?;
    let (circuit, layout) = build_pipeline(net, root, terminals)?;
    let (ones, shots) = sample_label(&circuit, &layout, shots, seed)?;
    let value = ones as f64 / shots as f64;
    let (ci_low, ci_high) = wilson_interval(ones, shots);
    Ok(ReliabilityEstimate {
        value,
        method: Method::Sampled,
        shots: Some(shots),
        ci_low: Some(ci_low),
        ci_high: Some(ci_high),
        seed,
    })
}

/// 95% Wilson score interval for `ones` successes out of `shots` trials.
///
/// Chosen over the Wald interval for sane behavior at proportions near 0
/// and 1, where reliabilities live.
pub fn wilson_interval(ones: u64, shots: u64) -> (f64, f64) {
    assert!(shots >= 1 && ones <= shots);
    let n = shots as f64;
    let p = ones as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denominator = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denominator;
    let half_width =
        WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denominator;
    ((center - half_width).max(0.0), (center + half_width).min(1.0))
}

/// How the sweep draws edge failure probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbabilityDraw {
    /// Uniform on `[0, 1)`.
    #[serde(rename = "uniform")]
    Uniform,
    /// Adversarial: each probability is exactly 0 or 1, making every
    /// reliability an exact 0/1 indicator.
    #[serde(rename = "zero-one")]
    ZeroOne,
}

/// Parameters of a verification sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub trials: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub probabilities: ProbabilityDraw,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_nodes: 5,
            max_edges: 7,
            trials: 100,
            tolerance: 1e-9,
            seed: 0,
            probabilities: ProbabilityDraw::Uniform,
        }
    }
}

/// One sweep trial: the generated instance and both reliability routes.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub graph: Network,
    pub root: usize,
    pub terminals: usize,
    pub r_exact: f64,
    pub r_quantum: f64,
    pub deviation: f64,
    /// Whether every reachability pass matched its classical analogue and
    /// the final pass matched BFS reachability, for every edge configuration.
    pub reachability_match: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub trials: usize,
    pub max_deviation: f64,
    pub reachability_failures: usize,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub trials: Vec<TrialRecord>,
    pub summary: SweepSummary,
}

/// Draws a random network plus root and terminal count.
///
/// The edge set is a uniformly chosen subset (without duplicates) of all
/// node pairs, capped at `max_edges`, so connected and disconnected
/// instances both occur and zero-reliability paths get exercised.
fn random_instance<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
    max_edges: usize,
    draw: ProbabilityDraw,
) -> (Network, usize, usize) {
    let num_nodes = rng.gen_range(1..=max_nodes);
    let mut pairs: Vec<(usize, usize)> = (0..num_nodes)
        .flat_map(|i| ((i + 1)..num_nodes).map(move |j| (i, j)))
        .collect();
    let num_edges = rng.gen_range(0..=max_edges.min(pairs.len()));
    for k in 0..num_edges {
        let pick = rng.gen_range(k..pairs.len());
        pairs.swap(k, pick);
    }
    let edges = pairs[..num_edges]
        .iter()
        .map(|&(u, v)| {
            let p_fail = match draw {
                ProbabilityDraw::Uniform => rng.gen(),
                ProbabilityDraw::ZeroOne => {
                    if rng.gen_bool(0.5) {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
            Edge::new(u, v, p_fail)
        })
        .collect();
    let net = Network::new(num_nodes, edges).expect("generated instances are valid");
    let root = rng.gen_range(0..num_nodes);
    let terminals = rng.gen_range(1..=num_nodes);
    (net, root, terminals)
}

/// Replays the reachability cascade pass by pass and checks every edge
/// configuration's node register against the classical sweep analogue; the
/// final pass must additionally equal plain BFS reachability.
fn passes_match_classical(
    net: &Network,
    root: usize,
    seed: u64,
) -> Result<bool, EstimatorError> {
    let total_passes = net.num_nodes().saturating_sub(1);
    for passes in 1..=total_passes {
        let (circuit, layout) = build_pipeline_prefix(net, root, passes)?;
        let result = run_circuit(&circuit, derive_seed(seed, passes as u64))?;
        let support = support_decomposition(&result.state, &layout)?;
        for entry in &support {
            let swept = sweep_reachability(net, entry.config, root, passes);
            for (node, &reached) in swept.iter().enumerate() {
                if ((entry.node_bits >> node) & 1 == 1) != reached {
                    return Ok(false);
                }
            }
            if passes == total_passes {
                let distances = hop_distances(net, entry.config, root);
                for (node, distance) in distances.iter().enumerate() {
                    if ((entry.node_bits >> node) & 1 == 1) != distance.is_some() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Cross-validates exact readout against the enumeration oracle on randomly
/// generated instances. Failures are report content, not errors.
pub fn verify_sweep(config: &SweepConfig) -> Result<SweepReport, EstimatorError> {
    let mut trials = Vec::with_capacity(config.trials);
    let mut max_deviation: f64 = 0.0;
    let mut reachability_failures = 0;
    for trial in 0..config.trials {
        let trial_seed = derive_seed(config.seed, trial as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let (net, root, terminals) =
            random_instance(&mut rng, config.max_nodes, config.max_edges, config.probabilities);
        check_budget(&net)?;
        let r_exact = exact_reliability(&net, root, terminals)?;
        let r_quantum =
            quantum_reliability_exact_readout(&net, root, terminals, derive_seed(trial_seed, 1))?
                .value;
        let deviation = (r_exact - r_quantum).abs();
        max_deviation = max_deviation.max(deviation);
        let reachability_match = passes_match_classical(&net, root, derive_seed(trial_seed, 2))?;
        if !reachability_match {
            reachability_failures += 1;
        }
        trials.push(TrialRecord {
            trial,
            graph: net,
            root,
            terminals,
            r_exact,
            r_quantum,
            deviation,
            reachability_match,
        });
    }
    let passed = max_deviation <= config.tolerance && reachability_failures == 0;
    Ok(SweepReport {
        config: config.clone(),
        trials,
        summary: SweepSummary {
            trials: config.trials,
            max_deviation,
            reachability_failures,
            tolerance: config.tolerance,
            passed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn net(num_nodes: usize, edges: &[(usize, usize, f64)]) -> Network {
        Network::new(
            num_nodes,
            edges.iter().map(|&(u, v, p)| Edge::new(u, v, p)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn exact_readout_matches_oracle_on_named_instances() {
        let cases: [(Network, usize, usize, f64); 3] = [
            (net(2, &[(0, 1, 0.25)]), 0, 2, 0.75),
            (net(3, &[(0, 1, 0.5), (1, 2, 0.5), (0, 2, 0.5)]), 0, 3, 0.5),
            (net(3, &[(0, 1, 0.5), (1, 2, 0.5)]), 0, 2, 0.5),
        ];
        for (network, root, terminals, expected) in cases {
            let estimate =
                quantum_reliability_exact_readout(&network, root, terminals, 0).unwrap();
            assert!((estimate.value - expected).abs() < 1e-9);
            assert_eq!(estimate.method, Method::ExactReadout);
            let oracle = exact_reliability(&network, root, terminals).unwrap();
            assert!((estimate.value - oracle).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_readout_is_seed_invariant() {
        let network = net(4, &[(0, 1, 0.2), (1, 2, 0.8), (2, 3, 0.4), (0, 3, 0.6)]);
        let baseline = quantum_reliability_exact_readout(&network, 0, 4, 0)
            .unwrap()
            .value;
        for seed in 1..8 {
            let value = quantum_reliability_exact_readout(&network, 0, 4, seed)
                .unwrap()
                .value;
            assert!((value - baseline).abs() <= 1e-12);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let edges: Vec<Edge> = (0..23).map(|i| Edge::new(i, i + 1, 0.5)).collect();
        let chain = Network::new(24, edges).unwrap();
        let err = quantum_reliability_exact_readout(&chain, 0, 24, 0).unwrap_err();
        assert_eq!(err.kind(), "qubit-budget-exceeded");
    }

    #[test]
    fn sampled_estimate_concentrates_and_brackets() {
        let network = net(2, &[(0, 1, 0.25)]);
        let estimate = quantum_reliability_sampled(&network, 0, 2, 10_000, 0).unwrap();
        assert!((0.73..=0.77).contains(&estimate.value));
        assert!(estimate.ci_low.unwrap() <= 0.75 && 0.75 <= estimate.ci_high.unwrap());
        assert_eq!(estimate.shots, Some(10_000));
    }

    #[test]
    fn sampled_estimate_handles_certainties() {
        let solid = net(2, &[(0, 1, 0.0)]);
        let estimate = quantum_reliability_sampled(&solid, 0, 2, 128, 0).unwrap();
        assert_eq!(estimate.value, 1.0);
        assert_eq!(estimate.ci_high, Some(1.0));
    }

    #[test]
    fn single_shot_estimates_are_bits_with_wide_intervals() {
        let network = net(2, &[(0, 1, 0.25)]);
        let estimate = quantum_reliability_sampled(&network, 0, 2, 1, 0).unwrap();
        assert!(estimate.value == 0.0 || estimate.value == 1.0);
        let width = estimate.ci_high.unwrap() - estimate.ci_low.unwrap();
        assert!(width > 0.5, "one-shot interval should be wide, got {width}");
    }

    #[test]
    fn zero_shots_is_an_error() {
        let network = net(2, &[(0, 1, 0.25)]);
        let err = quantum_reliability_sampled(&network, 0, 2, 0, 0).unwrap_err();
        assert_eq!(err.kind(), "zero-shots");
    }

    #[test]
    fn wilson_interval_is_ordered_and_clamped() {
        for (ones, shots) in [(0u64, 1u64), (1, 1), (5, 10), (9999, 10000), (0, 10000)] {
            let (low, high) = wilson_interval(ones, shots);
            let p = ones as f64 / shots as f64;
            assert!(0.0 <= low && low <= p && p <= high && high <= 1.0);
        }
    }

    #[test]
    fn sweep_passes_at_default_settings_scaled_down() {
        let report = verify_sweep(&SweepConfig {
            trials: 20,
            ..SweepConfig::default()
        })
        .unwrap();
        assert!(report.summary.passed, "summary: {:?}", report.summary);
        assert!(report.summary.max_deviation <= 1e-9);
        assert_eq!(report.trials.len(), 20);
    }

    #[test]
    fn sweep_with_zero_trials_is_an_empty_pass() {
        let report = verify_sweep(&SweepConfig {
            trials: 0,
            ..SweepConfig::default()
        })
        .unwrap();
        assert!(report.summary.passed);
        assert_eq!(report.summary.max_deviation, 0.0);
        assert!(report.trials.is_empty());
    }

    #[test]
    fn adversarial_probabilities_match_exactly() {
        let report = verify_sweep(&SweepConfig {
            trials: 30,
            probabilities: ProbabilityDraw::ZeroOne,
            ..SweepConfig::default()
        })
        .unwrap();
        assert!(report.summary.passed);
        assert_eq!(report.summary.max_deviation, 0.0);
        for trial in &report.trials {
            assert!(trial.r_exact == 0.0 || trial.r_exact == 1.0);
            assert_eq!(trial.r_exact, trial.r_quantum);
        }
    }

    #[test]
    fn sweep_is_deterministic_in_its_seed() {
        let config = SweepConfig {
            trials: 5,
            ..SweepConfig::default()
        };
        let a = verify_sweep(&config).unwrap();
        let b = verify_sweep(&config).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn report_serializes_graphs_in_document_format() {
        let report = verify_sweep(&SweepConfig {
            trials: 2,
            ..SweepConfig::default()
        })
        .unwrap();
        let json = serde_json::to_value(&report).unwrap();
        let graph = &json["trials"][0]["graph"];
        assert!(graph.get("num_nodes").is_some());
        assert!(graph.get("edges").is_some());
    }

    #[test]
    fn sampling_error_shrinks_with_shot_count() {
        let network = net(2, &[(0, 1, 0.25)]);
        let mut widths = Vec::new();
        for shots in [100u64, 1_000, 10_000] {
            let estimate = quantum_reliability_sampled(&network, 0, 2, shots, 0).unwrap();
            widths.push(estimate.ci_high.unwrap() - estimate.ci_low.unwrap());
        }
        assert!(widths[0] > widths[1] && widths[1] > widths[2]);
    }
}
