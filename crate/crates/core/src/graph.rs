//! Undirected probabilistic networks and the exhaustive classical oracle.
//!
//! A [`Network`] is an undirected graph whose edges fail independently, each
//! with its own failure probability. This module owns the JSON graph format,
//! per-configuration reachability queries, and [`exact_reliability`], the
//! brute-force enumeration over all `2^E` edge-failure configurations that
//! serves as ground truth for the simulator-based estimators.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default limit on the edge count accepted by [`exact_reliability`].
///
/// `2^24` configurations keep a full enumeration within seconds; anything
/// larger is refused instead of silently hanging.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Validation and oracle errors for probabilistic networks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("malformed graph document: {0}")]
    MalformedDocument(String),
    #[error("num_nodes must be a positive integer")]
    InvalidNodeCount,
    #[error("edge {index} ({u},{v}): p_fail {p_fail} is outside [0, 1]")]
    ProbabilityOutOfRange {
        index: usize,
        u: usize,
        v: usize,
        p_fail: f64,
    },
    #[error("edge {index}: self-loop at node {node}")]
    SelfLoop { index: usize, node: usize },
    #[error("edge {index}: duplicate undirected edge ({u},{v})")]
    DuplicateEdge { index: usize, u: usize, v: usize },
    #[error("edge {index}: endpoint {node} out of range for {num_nodes} nodes")]
    EndpointOutOfRange {
        index: usize,
        node: usize,
        num_nodes: usize,
    },
    #[error("instance too large: {edges} edges exceeds the enumeration cap of {cap}")]
    InstanceTooLarge { edges: usize, cap: usize },
    #[error("root {root} out of range for {num_nodes} nodes")]
    RootOutOfRange { root: usize, num_nodes: usize },
    #[error("terminal count {terminals} outside [1, {num_nodes}]")]
    TerminalsOutOfRange { terminals: usize, num_nodes: usize },
}

impl GraphError {
    /// Stable machine-readable identifier for this error, used in CLI output.
    pub fn kind(&self) -> &'static str {
        match self {
            GraphError::MalformedDocument(_) => "malformed-document",
            GraphError::InvalidNodeCount => "invalid-node-count",
            GraphError::ProbabilityOutOfRange { .. } => "probability-out-of-range",
            GraphError::SelfLoop { .. } => "self-loop",
            GraphError::DuplicateEdge { .. } => "duplicate-edge",
            GraphError::EndpointOutOfRange { .. } => "endpoint-out-of-range",
            GraphError::InstanceTooLarge { .. } => "instance-too-large",
            GraphError::RootOutOfRange { .. } => "root-out-of-range",
            GraphError::TerminalsOutOfRange { .. } => "terminals-out-of-range",
        }
    }
}

/// An undirected edge with its failure probability.
///
/// Stored with `u < v`; traversal uses both directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub p_fail: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, p_fail: f64) -> Self {
        Edge { u, v, p_fail }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    num_nodes: usize,
    edges: Vec<Edge>,
}

/// An undirected graph over nodes `0..num_nodes` with per-edge failure
/// probabilities.
///
/// The position of an edge in the input sequence is its edge index, and that
/// order is the canonical iteration order everywhere downstream (circuit
/// construction, configuration bit layout, reports).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkDoc")]
pub struct Network {
    num_nodes: usize,
    edges: Vec<Edge>,
}

impl TryFrom<NetworkDoc> for Network {
    type Error = GraphError;

    fn try_from(doc: NetworkDoc) -> Result<Self, GraphError> {
        Network::new(doc.num_nodes, doc.edges)
    }
}

impl Network {
    /// Validates and normalizes a node count and edge list into a `Network`.
    ///
    /// Endpoints are reordered so that `u < v`; edge order is preserved.
    pub fn new(num_nodes: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if num_nodes == 0 {
            return Err(GraphError::InvalidNodeCount);
        }
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(edges.len());
        for (index, edge) in edges.into_iter().enumerate() {
            for node in [edge.u, edge.v] {
                if node >= num_nodes {
                    return Err(GraphError::EndpointOutOfRange {
                        index,
                        node,
                        num_nodes,
                    });
                }
            }
            if edge.u == edge.v {
                return Err(GraphError::SelfLoop {
                    index,
                    node: edge.u,
                });
            }
            if !(0.0..=1.0).contains(&edge.p_fail) {
                return Err(GraphError::ProbabilityOutOfRange {
                    index,
                    u: edge.u,
                    v: edge.v,
                    p_fail: edge.p_fail,
                });
            }
            let (u, v) = (edge.u.min(edge.v), edge.u.max(edge.v));
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { index, u, v });
            }
            normalized.push(Edge {
                u,
                v,
                p_fail: edge.p_fail,
            });
        }
        Ok(Network {
            num_nodes,
            edges: normalized,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Parses the JSON graph document format.
///
/// The document is an object with `num_nodes` (integer) and `edges` (array of
/// `{"u": .., "v": .., "p_fail": ..}` objects). Array order is significant:
/// it fixes the edge indices.
pub fn parse_network(text: &str) -> Result<Network, GraphError> {
    let doc: NetworkDoc =
        serde_json::from_str(text).map_err(|e| GraphError::MalformedDocument(e.to_string()))?;
    Network::try_from(doc)
}

/// One assignment of failed/survived to every edge, packed into a bit mask.
///
/// Bit `e` set means edge `e` survived (did not fail); clear means it failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeConfig(pub u64);

impl EdgeConfig {
    /// Whether edge `edge_index` survived in this configuration.
    pub fn contains(self, edge_index: usize) -> bool {
        (self.0 >> edge_index) & 1 == 1
    }

    /// The configuration in which every one of `num_edges` edges survived.
    pub fn all_present(num_edges: usize) -> Self {
        debug_assert!(num_edges < 64);
        EdgeConfig((1u64 << num_edges) - 1)
    }
}

/// Reusable BFS machinery over one network, shared across many configurations.
struct Traversal {
    adjacency: Vec<Vec<(usize, usize)>>, // node -> (neighbor, edge index)
    visited: Vec<u32>,
    stamp: u32,
    queue: VecDeque<usize>,
}

impl Traversal {
    fn new(net: &Network) -> Self {
        let mut adjacency = vec![Vec::new(); net.num_nodes()];
        for (index, edge) in net.edges().iter().enumerate() {
            adjacency[edge.u].push((edge.v, index));
            adjacency[edge.v].push((edge.u, index));
        }
        Traversal {
            adjacency,
            visited: vec![0; net.num_nodes()],
            stamp: 0,
            queue: VecDeque::new(),
        }
    }

    /// Breadth-first count of nodes reachable from `root` over surviving edges.
    fn reachable_count(&mut self, config: EdgeConfig, root: usize) -> usize {
        self.stamp += 1;
        self.queue.clear();
        self.visited[root] = self.stamp;
        self.queue.push_back(root);
        let mut count = 1;
        while let Some(node) = self.queue.pop_front() {
            for &(next, edge_index) in &self.adjacency[node] {
                if config.contains(edge_index) && self.visited[next] != self.stamp {
                    self.visited[next] = self.stamp;
                    self.queue.push_back(next);
                    count += 1;
                }
            }
        }
        count
    }

    /// Breadth-first hop distance from `root` to every node, `None` if unreachable.
    fn hop_distances(&mut self, config: EdgeConfig, root: usize) -> Vec<Option<usize>> {
        let mut distances = vec![None; self.adjacency.len()];
        distances[root] = Some(0);
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(node) = self.queue.pop_front() {
            let next_hop = distances[node].expect("queued nodes have a distance") + 1;
            for &(next, edge_index) in &self.adjacency[node] {
                if config.contains(edge_index) && distances[next].is_none() {
                    distances[next] = Some(next_hop);
                    self.queue.push_back(next);
                }
            }
        }
        distances
    }
}

/// Number of nodes reachable from `root` (inclusive) using only edges whose
/// configuration bit is set.
pub fn reachable_count(net: &Network, config: EdgeConfig, root: usize) -> usize {
    assert!(root < net.num_nodes(), "root out of range");
    Traversal::new(net).reachable_count(config, root)
}

/// Hop distance from `root` to every node under `config`; `None` when unreachable.
pub fn hop_distances(net: &Network, config: EdgeConfig, root: usize) -> Vec<Option<usize>> {
    assert!(root < net.num_nodes(), "root out of range");
    Traversal::new(net).hop_distances(config, root)
}

/// Reachability flags after `sweeps` in-order relaxation passes from `root`.
///
/// One pass visits edges in canonical order and, per edge `(u,v)`, first
/// propagates `u -> v` and then `v -> u`, with updates visible immediately
/// within the same pass. This is the classical analogue of one inner loop of
/// the reachability circuit and is used to cross-check its per-pass behavior;
/// after `num_nodes - 1` passes it equals plain BFS reachability.
pub fn sweep_reachability(
    net: &Network,
    config: EdgeConfig,
    root: usize,
    sweeps: usize,
) -> Vec<bool> {
    assert!(root < net.num_nodes(), "root out of range");
    let mut reached = vec![false; net.num_nodes()];
    reached[root] = true;
    for _ in 0..sweeps {
        for (index, edge) in net.edges().iter().enumerate() {
            if !config.contains(index) {
                continue;
            }
            if reached[edge.u] && !reached[edge.v] {
                reached[edge.v] = true;
            }
            if reached[edge.v] && !reached[edge.u] {
                reached[edge.u] = true;
            }
        }
    }
    reached
}

/// Probability that exactly this edge-failure configuration occurs: the
/// product of `p_fail` over failed edges and `1 - p_fail` over survivors.
pub fn config_probability(net: &Network, config: EdgeConfig) -> f64 {
    debug_assert!(
        net.num_edges() == 64 || config.0 < (1u64 << net.num_edges()),
        "configuration has bits beyond the edge count"
    );
    let mut probability = 1.0;
    for (index, edge) in net.edges().iter().enumerate() {
        if config.contains(index) {
            probability *= 1.0 - edge.p_fail;
        } else {
            probability *= edge.p_fail;
        }
    }
    probability
}

/// Exact reliability by exhaustive enumeration, with the default edge cap.
///
/// Sums the probability of every configuration in which at least `terminals`
/// nodes are reachable from `root`. With `terminals == num_nodes` this is the
/// all-terminal reliability, and the root choice is irrelevant.
pub fn exact_reliability(net: &Network, root: usize, terminals: usize) -> Result<f64, GraphError> {
    exact_reliability_with_cap(net, root, terminals, DEFAULT_ENUMERATION_CAP)
}

/// Exact reliability by exhaustive enumeration with an explicit edge cap.
///
/// Refuses instances with more than `cap` edges rather than hang. The sum is
/// Kahan-compensated and runs in a fixed configuration order, so the result
/// is deterministic.
pub fn exact_reliability_with_cap(
    net: &Network,
    root: usize,
    terminals: usize,
    cap: usize,
) -> Result<f64, GraphError> {
    if root >= net.num_nodes() {
        return Err(GraphError::RootOutOfRange {
            root,
            num_nodes: net.num_nodes(),
        });
    }
    if terminals == 0 || terminals > net.num_nodes() {
        return Err(GraphError::TerminalsOutOfRange {
            terminals,
            num_nodes: net.num_nodes(),
        });
    }
    if net.num_edges() > cap {
        return Err(GraphError::InstanceTooLarge {
            edges: net.num_edges(),
            cap,
        });
    }

    let mut traversal = Traversal::new(net);
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for mask in 0..(1u64 << net.num_edges()) {
        let config = EdgeConfig(mask);
        let probability = config_probability(net, config);
        if probability == 0.0 {
            continue;
        }
        if traversal.reachable_count(config, root) >= terminals {
            let y = probability - compensation;
            let t = sum + y;
            compensation = (t - sum) - y;
            sum = t;
        }
    }
    Ok(sum)
}
