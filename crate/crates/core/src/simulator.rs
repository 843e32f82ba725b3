//! Dense state-vector execution of circuits.
//!
//! The simulator applies the gate IR on `2^n` complex amplitudes, handles
//! mid-circuit measurement with seeded randomness, tracks classical record
//! slots, and exposes marginal-probability readout. Basis index bit `q`
//! holds the state of qubit `q`.
//!
//! Everything is deterministic given a circuit and a seed; independent shots
//! derive their own seeds through [`derive_seed`], so shot order or
//! parallelism cannot change results.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Control, Gate, Polarity, QubitLayout};
use crate::graph::EdgeConfig;

/// Branch probabilities below this are treated as impossible outcomes.
const MEASUREMENT_FLOOR: f64 = 1e-14;

/// Amplitudes at or below this magnitude are considered zero when
/// enumerating the support of a state.
const SUPPORT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulatorError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("{kind} is classical and cannot be applied as a unitary")]
    ClassicalGateInUnitaryPath { kind: &'static str },
    #[error(
        "measurement of qubit {qubit} found no probability mass (p0={p0:.3e}, p1={p1:.3e})"
    )]
    VanishingProbability { qubit: usize, p0: f64, p1: f64 },
    #[error("record slot {slot} read before any measurement wrote it")]
    SlotUnwritten { slot: usize },
    #[error("edge configuration {config:#b} maps to more than one register state")]
    SuperposedNodeRegister { config: u64 },
}

impl SimulatorError {
    pub fn kind(&self) -> &'static str {
        match self {
            SimulatorError::QubitOutOfRange { .. } => "qubit-out-of-range",
            SimulatorError::ClassicalGateInUnitaryPath { .. } => "classical-gate-misuse",
            SimulatorError::VanishingProbability { .. } => "vanishing-probability",
            SimulatorError::SlotUnwritten { .. } => "slot-unwritten",
            SimulatorError::SuperposedNodeRegister { .. } => "superposed-node-register",
        }
    }
}

/// `2^n` complex amplitudes over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state.
    pub fn zero_state(num_qubits: usize) -> Self {
        assert!(num_qubits < 30, "state vector would exceed memory budget");
        let mut amps = vec![Complex64::ZERO; 1 << num_qubits];
        amps[0] = Complex64::ONE;
        StateVector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, basis_index: usize) -> Complex64 {
        self.amps[basis_index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Debug dump: `basis_index real imag`, one basis state per line,
    /// sorted by basis index.
    pub fn dump(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        for (index, amp) in self.amps.iter().enumerate() {
            let _ = writeln!(out, "{index} {} {}", amp.re, amp.im);
        }
        out
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), SimulatorError> {
        if qubit >= self.num_qubits {
            Err(SimulatorError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    fn apply_single(&mut self, target: usize, matrix: [[f64; 2]; 2]) {
        let bit = 1usize << target;
        for index in 0..self.amps.len() {
            if index & bit == 0 {
                let paired = index | bit;
                let low = self.amps[index];
                let high = self.amps[paired];
                self.amps[index] = matrix[0][0] * low + matrix[0][1] * high;
                self.amps[paired] = matrix[1][0] * low + matrix[1][1] * high;
            }
        }
    }
}

fn control_masks(controls: &[Control]) -> (usize, usize) {
    let mut closed = 0usize;
    let mut open = 0usize;
    for control in controls {
        match control.polarity {
            Polarity::Closed => closed |= 1 << control.qubit,
            Polarity::Open => open |= 1 << control.qubit,
        }
    }
    (closed, open)
}

fn qubit_mask(qubits: &[usize]) -> usize {
    qubits.iter().fold(0usize, |mask, q| mask | (1 << q))
}

/// Applies one unitary IR gate in place.
///
/// `Measure` and `ClassicallyControlledNot` are classical operations and are
/// rejected here; they are handled by [`run_circuit`].
pub fn apply_gate(state: &mut StateVector, gate: &Gate) -> Result<(), SimulatorError> {
    match gate {
        Gate::RotateY { target, angle } => {
            state.check_qubit(*target)?;
            let (sin, cos) = (angle / 2.0).sin_cos();
            state.apply_single(*target, [[cos, -sin], [sin, cos]]);
        }
        Gate::Not { target } => {
            state.check_qubit(*target)?;
            let bit = 1usize << *target;
            for index in 0..state.amps.len() {
                if index & bit == 0 {
                    state.amps.swap(index, index | bit);
                }
            }
        }
        Gate::Hadamard { target } => {
            state.check_qubit(*target)?;
            let h = std::f64::consts::FRAC_1_SQRT_2;
            state.apply_single(*target, [[h, h], [h, -h]]);
        }
        Gate::PauliZ { target } => {
            state.check_qubit(*target)?;
            let bit = 1usize << *target;
            for index in 0..state.amps.len() {
                if index & bit != 0 {
                    state.amps[index] = -state.amps[index];
                }
            }
        }
        Gate::ControlledNot { controls, target } => {
            state.check_qubit(*target)?;
            for control in controls {
                state.check_qubit(control.qubit)?;
            }
            let (closed, open) = control_masks(controls);
            let bit = 1usize << *target;
            for index in 0..state.amps.len() {
                if index & bit == 0 && index & closed == closed && index & open == 0 {
                    state.amps.swap(index, index | bit);
                }
            }
        }
        Gate::ControlledZ { controls, target } => {
            state.check_qubit(*target)?;
            for &control in controls {
                state.check_qubit(control)?;
            }
            let mask = qubit_mask(controls) | (1 << *target);
            for index in 0..state.amps.len() {
                if index & mask == mask {
                    state.amps[index] = -state.amps[index];
                }
            }
        }
        Gate::ThresholdPhaseFlip { qubits, threshold } => {
            for &qubit in qubits {
                state.check_qubit(qubit)?;
            }
            let mask = qubit_mask(qubits);
            for index in 0..state.amps.len() {
                if (index & mask).count_ones() as usize >= *threshold {
                    state.amps[index] = -state.amps[index];
                }
            }
        }
        Gate::ThresholdNot {
            controls,
            threshold,
            target,
        } => {
            state.check_qubit(*target)?;
            for &control in controls {
                state.check_qubit(control)?;
            }
            let mask = qubit_mask(controls);
            let bit = 1usize << *target;
            for index in 0..state.amps.len() {
                if index & bit == 0 && (index & mask).count_ones() as usize >= *threshold {
                    state.amps.swap(index, index | bit);
                }
            }
        }
        Gate::Measure { .. } | Gate::ClassicallyControlledNot { .. } => {
            return Err(SimulatorError::ClassicalGateInUnitaryPath {
                kind: gate.kind().name(),
            });
        }
    }
    Ok(())
}

/// Projectively measures one qubit, collapsing and renormalizing the state.
///
/// Exactly one uniform draw is consumed per call, compared against the
/// cumulative marginal, so the stream position never depends on the state.
/// Branches below the probability floor are never selected; when both
/// branches are below it the state is corrupt and the call fails.
pub fn measure<R: Rng>(
    state: &mut StateVector,
    qubit: usize,
    rng: &mut R,
) -> Result<bool, SimulatorError> {
    state.check_qubit(qubit)?;
    let bit = 1usize << qubit;
    let mut p0 = 0.0;
    let mut p1 = 0.0;
    for (index, amp) in state.amps.iter().enumerate() {
        if index & bit == 0 {
            p0 += amp.norm_sqr();
        } else {
            p1 += amp.norm_sqr();
        }
    }
    let draw: f64 = rng.gen();
    let outcome = if p0 < MEASUREMENT_FLOOR && p1 < MEASUREMENT_FLOOR {
        return Err(SimulatorError::VanishingProbability { qubit, p0, p1 });
    } else if p1 < MEASUREMENT_FLOOR {
        false
    } else if p0 < MEASUREMENT_FLOOR {
        true
    } else {
        draw >= p0
    };
    let keep = if outcome { bit } else { 0 };
    let kept_probability = if outcome { p1 } else { p0 };
    let scale = 1.0 / kept_probability.sqrt();
    for (index, amp) in state.amps.iter_mut().enumerate() {
        if index & bit == keep {
            *amp *= scale;
        } else {
            *amp = Complex64::ZERO;
        }
    }
    Ok(outcome)
}

/// Final state and measurement record of one circuit execution.
#[derive(Debug, Clone)]
pub struct ExecutionResult {
    pub state: StateVector,
    /// Measured bit per record slot; `None` for slots never written.
    pub records: Vec<Option<bool>>,
    pub seed: u64,
}

/// Runs a circuit from the all-zeros state under an existing random stream.
pub fn run_circuit_with_rng<R: Rng>(
    circuit: &Circuit,
    rng: &mut R,
) -> Result<(StateVector, Vec<Option<bool>>), SimulatorError> {
    let mut state = StateVector::zero_state(circuit.num_qubits());
    let mut records: Vec<Option<bool>> = vec![None; circuit.num_record_slots()];
    for gate in circuit.ops() {
        match gate {
            Gate::Measure { target, slot } => {
                let outcome = measure(&mut state, *target, rng)?;
                records[*slot] = Some(outcome);
            }
            Gate::ClassicallyControlledNot { target, slot } => {
                let recorded =
                    records[*slot].ok_or(SimulatorError::SlotUnwritten { slot: *slot })?;
                if recorded {
                    apply_gate(&mut state, &Gate::Not { target: *target })?;
                }
            }
            unitary => apply_gate(&mut state, unitary)?,
        }
    }
    Ok((state, records))
}

/// Runs a circuit from the all-zeros state; deterministic in `(circuit, seed)`.
pub fn run_circuit(circuit: &Circuit, seed: u64) -> Result<ExecutionResult, SimulatorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (state, records) = run_circuit_with_rng(circuit, &mut rng)?;
    Ok(ExecutionResult {
        state,
        records,
        seed,
    })
}

/// Probability of reading `value` on `qubit`: the incoherent sum of
/// `|amplitude|^2` over matching basis states.
pub fn marginal_probability(state: &StateVector, qubit: usize, value: bool) -> f64 {
    assert!(qubit < state.num_qubits(), "qubit out of range");
    let bit = 1usize << qubit;
    let want = if value { bit } else { 0 };
    state
        .amps
        .iter()
        .enumerate()
        .filter(|(index, _)| index & bit == want)
        .map(|(_, amp)| amp.norm_sqr())
        .sum()
}

/// One nonzero branch of a state, keyed by its edge configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportEntry {
    pub config: EdgeConfig,
    /// Bit `i` set means node qubit `i` reads `|1>` in this branch.
    pub node_bits: u64,
    pub amplitude: Complex64,
}

/// Decomposes a state into per-edge-configuration branches.
///
/// Requires that the node register (together with aux and label) is a
/// function of the edge configuration: every configuration with nonzero
/// amplitude must select exactly one basis state. Violations surface as
/// [`SimulatorError::SuperposedNodeRegister`], which signals a bug in the
/// reachability cascade rather than bad input. Entries come back sorted by
/// configuration mask.
pub fn support_decomposition(
    state: &StateVector,
    layout: &QubitLayout,
) -> Result<Vec<SupportEntry>, SimulatorError> {
    use std::collections::BTreeMap;

    assert_eq!(
        state.num_qubits(),
        layout.total_qubits(),
        "layout does not match state size"
    );
    let mut branches: BTreeMap<u64, (usize, Complex64)> = BTreeMap::new();
    for (index, &amp) in state.amps.iter().enumerate() {
        if amp.norm() <= SUPPORT_FLOOR {
            continue;
        }
        let mut config = 0u64;
        for edge in 0..layout.num_edges() {
            config |= (((index >> layout.edge_qubit(edge)) & 1) as u64) << edge;
        }
        if let Some(&(existing_index, _)) = branches.get(&config) {
            if existing_index != index {
                return Err(SimulatorError::SuperposedNodeRegister { config });
            }
        }
        branches.insert(config, (index, amp));
    }
    Ok(branches
        .into_iter()
        .map(|(config, (index, amplitude))| {
            let mut node_bits = 0u64;
            for node in 0..layout.num_nodes() {
                node_bits |= (((index >> layout.node_qubit(node)) & 1) as u64) << node;
            }
            SupportEntry {
                config: EdgeConfig(config),
                node_bits,
                amplitude,
            }
        })
        .collect())
}

/// Runs `shots` independent executions and counts label-qubit readings of 1.
///
/// Shot `i` runs under seed `derive_seed(seed, i)` and ends with one final
/// measurement of the label qubit on the same stream.
pub fn sample_label(
    circuit: &Circuit,
    layout: &QubitLayout,
    shots: u64,
    seed: u64,
) -> Result<(u64, u64), SimulatorError> {
    assert!(shots >= 1, "at least one shot is required");
    let mut ones = 0;
    for shot in 0..shots {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, shot));
        let (mut state, _) = run_circuit_with_rng(circuit, &mut rng)?;
        if measure(&mut state, layout.label_qubit(), &mut rng)? {
            ones += 1;
        }
    }
    Ok((ones, shots))
}

/// The `index`-th output of a SplitMix64 stream seeded with `master`.
///
/// Used to derive independent per-shot and per-trial seeds from one master
/// seed without sharing stream state.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
