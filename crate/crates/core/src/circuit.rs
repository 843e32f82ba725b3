//! Gate-level intermediate representation and circuit builders.
//!
//! Circuits are plain data: a qubit count, a number of classical record
//! slots, and an ordered gate sequence. The builders in this module assemble
//! the full reliability pipeline for a [`Network`]: per-edge rotations that
//! load failure amplitudes, a root marker, the measurement-assisted
//! reachability cascade, and a terminal-count label gate.
//!
//! Multi-controlled and threshold gates stay undecomposed IR primitives; the
//! simulator applies them directly on basis states.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Network;

/// Structural validation errors for circuits and builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("gate {gate_index}: qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange {
        gate_index: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("gate {gate_index}: qubit {qubit} appears more than once in the gate")]
    OverlappingQubits { gate_index: usize, qubit: usize },
    #[error("gate {gate_index}: record slot {slot} out of range for {num_record_slots} slots")]
    SlotOutOfRange {
        gate_index: usize,
        slot: usize,
        num_record_slots: usize,
    },
    #[error("gate {gate_index}: record slot {slot} is measured more than once")]
    SlotMeasuredTwice { gate_index: usize, slot: usize },
    #[error("gate {gate_index}: record slot {slot} is read before any measurement writes it")]
    SlotReadBeforeMeasure { gate_index: usize, slot: usize },
    #[error("root {root} out of range for {num_nodes} nodes")]
    RootOutOfRange { root: usize, num_nodes: usize },
    #[error("terminal count {terminals} outside [1, {num_nodes}]")]
    TerminalsOutOfRange { terminals: usize, num_nodes: usize },
    #[error("pass count {passes} exceeds the {max} reachability passes of this network")]
    TooManyPasses { passes: usize, max: usize },
}

impl CircuitError {
    pub fn kind(&self) -> &'static str {
        match self {
            CircuitError::QubitOutOfRange { .. } => "qubit-out-of-range",
            CircuitError::OverlappingQubits { .. } => "overlapping-qubits",
            CircuitError::SlotOutOfRange { .. } => "slot-out-of-range",
            CircuitError::SlotMeasuredTwice { .. } => "slot-measured-twice",
            CircuitError::SlotReadBeforeMeasure { .. } => "slot-read-before-measure",
            CircuitError::RootOutOfRange { .. } => "root-out-of-range",
            CircuitError::TerminalsOutOfRange { .. } => "terminals-out-of-range",
            CircuitError::TooManyPasses { .. } => "too-many-passes",
        }
    }
}

/// Control polarity: closed triggers on `|1>`, open on `|0>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Open,
    Closed,
}

/// A control wire for a multi-controlled gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn closed(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Closed,
        }
    }

    pub fn open(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Open,
        }
    }
}

/// One gate of the intermediate representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// `exp(-i * angle * sigma_y / 2)` on `target`.
    RotateY { target: usize, angle: f64 },
    Not { target: usize },
    Hadamard { target: usize },
    PauliZ { target: usize },
    /// NOT on `target` when every control matches its polarity.
    ControlledNot { controls: Vec<Control>, target: usize },
    /// Phase flip when every (closed) control and the target read `|1>`.
    ControlledZ { controls: Vec<usize>, target: usize },
    /// Phase flip on basis states where at least `threshold` of `qubits` read `|1>`.
    ThresholdPhaseFlip { qubits: Vec<usize>, threshold: usize },
    /// NOT on `target` on basis states where at least `threshold` of
    /// `controls` read `|1>`.
    ThresholdNot {
        controls: Vec<usize>,
        threshold: usize,
        target: usize,
    },
    /// Projective measurement of `target`, outcome written to record `slot`.
    Measure { target: usize, slot: usize },
    /// NOT on `target` when the bit recorded in `slot` is 1.
    ClassicallyControlledNot { target: usize, slot: usize },
}

/// Gate discriminant, used for tallies and the textual dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    RotateY,
    Not,
    Hadamard,
    PauliZ,
    ControlledNot,
    ControlledZ,
    ThresholdPhaseFlip,
    ThresholdNot,
    Measure,
    ClassicallyControlledNot,
}

impl GateKind {
    /// Stable lowercase token, shared by the dump format and count reports.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::RotateY => "ry",
            GateKind::Not => "not",
            GateKind::Hadamard => "h",
            GateKind::PauliZ => "z",
            GateKind::ControlledNot => "cnot",
            GateKind::ControlledZ => "cz",
            GateKind::ThresholdPhaseFlip => "tphase",
            GateKind::ThresholdNot => "tnot",
            GateKind::Measure => "measure",
            GateKind::ClassicallyControlledNot => "clnot",
        }
    }
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::RotateY { .. } => GateKind::RotateY,
            Gate::Not { .. } => GateKind::Not,
            Gate::Hadamard { .. } => GateKind::Hadamard,
            Gate::PauliZ { .. } => GateKind::PauliZ,
            Gate::ControlledNot { .. } => GateKind::ControlledNot,
            Gate::ControlledZ { .. } => GateKind::ControlledZ,
            Gate::ThresholdPhaseFlip { .. } => GateKind::ThresholdPhaseFlip,
            Gate::ThresholdNot { .. } => GateKind::ThresholdNot,
            Gate::Measure { .. } => GateKind::Measure,
            Gate::ClassicallyControlledNot { .. } => GateKind::ClassicallyControlledNot,
        }
    }

    fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::RotateY { target, .. }
            | Gate::Not { target }
            | Gate::Hadamard { target }
            | Gate::PauliZ { target }
            | Gate::Measure { target, .. }
            | Gate::ClassicallyControlledNot { target, .. } => vec![*target],
            Gate::ControlledNot { controls, target } => {
                let mut qubits: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                qubits.push(*target);
                qubits
            }
            Gate::ControlledZ { controls, target } => {
                let mut qubits = controls.clone();
                qubits.push(*target);
                qubits
            }
            Gate::ThresholdPhaseFlip { qubits, .. } => qubits.clone(),
            Gate::ThresholdNot {
                controls, target, ..
            } => {
                let mut qubits = controls.clone();
                qubits.push(*target);
                qubits
            }
        }
    }

    fn slot_access(&self) -> Option<(usize, SlotAccess)> {
        match self {
            Gate::Measure { slot, .. } => Some((*slot, SlotAccess::Write)),
            Gate::ClassicallyControlledNot { slot, .. } => Some((*slot, SlotAccess::Read)),
            _ => None,
        }
    }
}

enum SlotAccess {
    Write,
    Read,
}

/// Register assignment for one network: node qubits first, then edge qubits,
/// then the shared ancilla, then the label qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitLayout {
    num_nodes: usize,
    num_edges: usize,
}

impl QubitLayout {
    pub fn new(net: &Network) -> Self {
        QubitLayout {
            num_nodes: net.num_nodes(),
            num_edges: net.num_edges(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn node_qubit(&self, node: usize) -> usize {
        assert!(node < self.num_nodes, "node index out of range");
        node
    }

    pub fn edge_qubit(&self, edge: usize) -> usize {
        assert!(edge < self.num_edges, "edge index out of range");
        self.num_nodes + edge
    }

    pub fn aux_qubit(&self) -> usize {
        self.num_nodes + self.num_edges
    }

    pub fn label_qubit(&self) -> usize {
        self.num_nodes + self.num_edges + 1
    }

    pub fn total_qubits(&self) -> usize {
        self.num_nodes + self.num_edges + 2
    }
}

/// An immutable, validated gate sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_record_slots: usize,
    ops: Vec<Gate>,
}

impl Circuit {
    /// Validates qubit ranges, per-gate qubit distinctness, slot ranges,
    /// write-once slots, and measure-before-read ordering.
    pub fn new(
        num_qubits: usize,
        num_record_slots: usize,
        ops: Vec<Gate>,
    ) -> Result<Self, CircuitError> {
        let mut written = vec![false; num_record_slots];
        for (gate_index, gate) in ops.iter().enumerate() {
            let mut seen = HashSet::new();
            for qubit in gate.qubits() {
                if qubit >= num_qubits {
                    return Err(CircuitError::QubitOutOfRange {
                        gate_index,
                        qubit,
                        num_qubits,
                    });
                }
                if !seen.insert(qubit) {
                    return Err(CircuitError::OverlappingQubits { gate_index, qubit });
                }
            }
            if let Some((slot, access)) = gate.slot_access() {
                if slot >= num_record_slots {
                    return Err(CircuitError::SlotOutOfRange {
                        gate_index,
                        slot,
                        num_record_slots,
                    });
                }
                match access {
                    SlotAccess::Write => {
                        if written[slot] {
                            return Err(CircuitError::SlotMeasuredTwice { gate_index, slot });
                        }
                        written[slot] = true;
                    }
                    SlotAccess::Read => {
                        if !written[slot] {
                            return Err(CircuitError::SlotReadBeforeMeasure { gate_index, slot });
                        }
                    }
                }
            }
        }
        Ok(Circuit {
            num_qubits,
            num_record_slots,
            ops,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_record_slots(&self) -> usize {
        self.num_record_slots
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    /// Textual dump, one gate per line, stable across releases.
    ///
    /// Formats: `ry <target> <angle>`, `not|h|z <target>`,
    /// `cnot <target> <+ctrl|-ctrl>...`, `cz <target> <+ctrl>...`,
    /// `tphase <threshold> <qubit>...`, `tnot <target> <threshold> <ctrl>...`,
    /// `measure <target> <slot>`, `clnot <target> <slot>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for gate in &self.ops {
            match gate {
                Gate::RotateY { target, angle } => {
                    let _ = writeln!(out, "ry {target} {angle}");
                }
                Gate::Not { target } => {
                    let _ = writeln!(out, "not {target}");
                }
                Gate::Hadamard { target } => {
                    let _ = writeln!(out, "h {target}");
                }
                Gate::PauliZ { target } => {
                    let _ = writeln!(out, "z {target}");
                }
                Gate::ControlledNot { controls, target } => {
                    let _ = write!(out, "cnot {target}");
                    for control in controls {
                        let sign = match control.polarity {
                            Polarity::Closed => '+',
                            Polarity::Open => '-',
                        };
                        let _ = write!(out, " {sign}{}", control.qubit);
                    }
                    out.push('\n');
                }
                Gate::ControlledZ { controls, target } => {
                    let _ = write!(out, "cz {target}");
                    for control in controls {
                        let _ = write!(out, " +{control}");
                    }
                    out.push('\n');
                }
                Gate::ThresholdPhaseFlip { qubits, threshold } => {
                    let _ = write!(out, "tphase {threshold}");
                    for qubit in qubits {
                        let _ = write!(out, " {qubit}");
                    }
                    out.push('\n');
                }
                Gate::ThresholdNot {
                    controls,
                    threshold,
                    target,
                } => {
                    let _ = write!(out, "tnot {target} {threshold}");
                    for control in controls {
                        let _ = write!(out, " {control}");
                    }
                    out.push('\n');
                }
                Gate::Measure { target, slot } => {
                    let _ = writeln!(out, "measure {target} {slot}");
                }
                Gate::ClassicallyControlledNot { target, slot } => {
                    let _ = writeln!(out, "clnot {target} {slot}");
                }
            }
        }
        out
    }
}

/// Rotation angle that loads a failure probability onto an edge qubit:
/// `RotateY(angle)` sends `|0>` to `sqrt(p_fail)|0> + sqrt(1-p_fail)|1>`.
pub fn edge_rotation_angle(p_fail: f64) -> f64 {
    2.0 * p_fail.sqrt().acos()
}

/// One rotation per edge qubit, loading every failure amplitude.
pub fn build_edge_init(net: &Network, layout: &QubitLayout) -> Vec<Gate> {
    net.edges()
        .iter()
        .enumerate()
        .map(|(index, edge)| Gate::RotateY {
            target: layout.edge_qubit(index),
            angle: edge_rotation_angle(edge.p_fail),
        })
        .collect()
}

/// Marks the root node as reached; all other node qubits stay `|0>`.
pub fn build_node_init(layout: &QubitLayout, root: usize) -> Vec<Gate> {
    vec![Gate::Not {
        target: layout.node_qubit(root),
    }]
}

/// One directed reachability gadget: `v_to <- v_to OR (v_from AND e_edge)`.
///
/// The ancilla first captures NOT `v_to` (open control), gates the
/// triple-controlled update, and is then measured through a Hadamard and
/// reset by a classically controlled NOT so it re-enters the next gadget in
/// `|0>`. The measurement outcome only affects the sign of the surviving
/// branch, never the magnitudes.
pub fn build_qc_or(
    layout: &QubitLayout,
    from_node: usize,
    to_node: usize,
    edge_index: usize,
    slot: usize,
) -> Vec<Gate> {
    let aux = layout.aux_qubit();
    let target = layout.node_qubit(to_node);
    vec![
        Gate::ControlledNot {
            controls: vec![Control::open(target)],
            target: aux,
        },
        Gate::ControlledNot {
            controls: vec![
                Control::closed(layout.node_qubit(from_node)),
                Control::closed(layout.edge_qubit(edge_index)),
                Control::closed(aux),
            ],
            target,
        },
        Gate::Hadamard { target: aux },
        Gate::Measure { target: aux, slot },
        Gate::ClassicallyControlledNot { target: aux, slot },
    ]
}

/// The first `passes` sweeps of the reachability cascade.
///
/// Each pass visits edges in canonical order and emits the `u -> v` gadget
/// followed by the `v -> u` gadget, consuming two record slots per edge.
pub fn build_reachability_passes(
    net: &Network,
    layout: &QubitLayout,
    passes: usize,
) -> Vec<Gate> {
    let mut ops = Vec::with_capacity(passes * net.num_edges() * 10);
    let mut slot = 0;
    for _ in 0..passes {
        for (index, edge) in net.edges().iter().enumerate() {
            ops.extend(build_qc_or(layout, edge.u, edge.v, index, slot));
            slot += 1;
            ops.extend(build_qc_or(layout, edge.v, edge.u, index, slot));
            slot += 1;
        }
    }
    ops
}

/// The full reachability operator: `num_nodes - 1` sweeps, enough for any
/// shortest path in the graph.
pub fn build_reachability(net: &Network, layout: &QubitLayout) -> Vec<Gate> {
    build_reachability_passes(net, layout, net.num_nodes().saturating_sub(1))
}

/// Flips the label qubit when at least `terminals` node qubits read `|1>`.
///
/// The all-terminal case is a plain multi-controlled NOT over every node
/// qubit; smaller terminal counts use the threshold primitive.
pub fn build_label(layout: &QubitLayout, terminals: usize) -> Vec<Gate> {
    assert!(
        terminals >= 1 && terminals <= layout.num_nodes(),
        "terminal count out of range"
    );
    let node_qubits: Vec<usize> = (0..layout.num_nodes())
        .map(|node| layout.node_qubit(node))
        .collect();
    if terminals == layout.num_nodes() {
        vec![Gate::ControlledNot {
            controls: node_qubits.into_iter().map(Control::closed).collect(),
            target: layout.label_qubit(),
        }]
    } else {
        vec![Gate::ThresholdNot {
            controls: node_qubits,
            threshold: terminals,
            target: layout.label_qubit(),
        }]
    }
}

/// Phase-flip oracle over the node register: multiplies by -1 exactly on
/// basis states where at least `terminals` node qubits read `|1>`.
pub fn build_phase_oracle(layout: &QubitLayout, terminals: usize) -> Vec<Gate> {
    assert!(
        terminals >= 1 && terminals <= layout.num_nodes(),
        "terminal count out of range"
    );
    vec![Gate::ThresholdPhaseFlip {
        qubits: (0..layout.num_nodes())
            .map(|node| layout.node_qubit(node))
            .collect(),
        threshold: terminals,
    }]
}

fn pipeline_parts(
    net: &Network,
    root: usize,
    passes: usize,
    label: Option<usize>,
) -> Result<(Circuit, QubitLayout), CircuitError> {
    let layout = QubitLayout::new(net);
    if root >= net.num_nodes() {
        return Err(CircuitError::RootOutOfRange {
            root,
            num_nodes: net.num_nodes(),
        });
    }
    if let Some(terminals) = label {
        if terminals == 0 || terminals > net.num_nodes() {
            return Err(CircuitError::TerminalsOutOfRange {
                terminals,
                num_nodes: net.num_nodes(),
            });
        }
    }
    let max_passes = net.num_nodes().saturating_sub(1);
    if passes > max_passes {
        return Err(CircuitError::TooManyPasses {
            passes,
            max: max_passes,
        });
    }
    let mut ops = build_edge_init(net, &layout);
    ops.extend(build_node_init(&layout, root));
    ops.extend(build_reachability_passes(net, &layout, passes));
    if let Some(terminals) = label {
        ops.extend(build_label(&layout, terminals));
    }
    let slots = 2 * net.num_edges() * passes;
    let circuit = Circuit::new(layout.total_qubits(), slots, ops)?;
    Ok((circuit, layout))
}

/// The complete pipeline: edge init, node init, full reachability, label.
pub fn build_pipeline(
    net: &Network,
    root: usize,
    terminals: usize,
) -> Result<(Circuit, QubitLayout), CircuitError> {
    pipeline_parts(
        net,
        root,
        net.num_nodes().saturating_sub(1),
        Some(terminals),
    )
}

/// Pipeline prefix: edge and node init plus the first `passes` reachability
/// sweeps, with no label gate. Used to inspect the cascade mid-flight.
pub fn build_pipeline_prefix(
    net: &Network,
    root: usize,
    passes: usize,
) -> Result<(Circuit, QubitLayout), CircuitError> {
    pipeline_parts(net, root, passes, None)
}

/// Exact tally of gates by kind.
pub fn gate_count_report(circuit: &Circuit) -> BTreeMap<GateKind, usize> {
    let mut counts = BTreeMap::new();
    for gate in circuit.ops() {
        *counts.entry(gate.kind()).or_insert(0) += 1;
    }
    counts
}
