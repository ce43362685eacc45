//! Interfaces between a physical qubit and the code space: an encoding
//! circuit followed by one EC gadget (encode direction), or one EC gadget
//! followed by the inverse encoding circuit and discards (decode
//! direction).

use crate::circuit::{CliffordCircuit, Gate};
use crate::code::{LogicalLabel, StabilizerCode};
use crate::gadget::{ec_gadget, EcGadget};
use crate::pauli::PauliKind;

/// Qubit carrying the logical input/output in the (inverse) encoder.
pub const IO_QUBIT: usize = 2;
/// Logical-X spreading targets: {2,4,5} is an odd-weight codeword, so the
/// input spreads onto a representative of logical X.
const SPREAD_TARGETS: [usize; 2] = [4, 5];
const PIVOTS: [usize; 3] = [3, 1, 0];
const TARGETS: [[usize; 3]; 3] = [[4, 5, 6], [2, 5, 6], [2, 4, 6]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum InterfaceDirection {
    Encode,
    Decode,
}

/// Gate list of the 7-qubit encoder taking an arbitrary state on
/// [`IO_QUBIT`] into the code space.
fn encoder_gates() -> Vec<Gate> {
    let mut gates = Vec::new();
    for q in 0..7 {
        if q != IO_QUBIT {
            gates.push(Gate::PrepZ(q));
        }
    }
    for &p in &PIVOTS {
        gates.push(Gate::H(p));
    }
    for &t in &SPREAD_TARGETS {
        gates.push(Gate::Cnot(IO_QUBIT, t));
    }
    for (row, &p) in PIVOTS.iter().enumerate() {
        for &t in &TARGETS[row] {
            gates.push(Gate::Cnot(p, t));
        }
    }
    gates
}

/// Reverse of the unitary part of the encoder (preparations excluded),
/// followed by discards of the six ancilla qubits.
fn inverse_encoder_gates() -> Vec<Gate> {
    let mut unitary = Vec::new();
    for (row, &p) in PIVOTS.iter().enumerate() {
        for &t in &TARGETS[row] {
            unitary.push(Gate::Cnot(p, t));
        }
    }
    let mut gates: Vec<Gate> = Vec::new();
    for g in unitary.into_iter().rev() {
        gates.push(g);
    }
    for &t in SPREAD_TARGETS.iter().rev() {
        gates.push(Gate::Cnot(IO_QUBIT, t));
    }
    for &p in PIVOTS.iter().rev() {
        gates.push(Gate::H(p));
    }
    for q in (0..7).rev() {
        if q != IO_QUBIT {
            gates.push(Gate::Discard(q));
        }
    }
    gates
}

/// A physical interface circuit: the extra segment plus the EC gadget it
/// composes with, with deterministic location counts.
#[derive(Debug, Clone)]
pub struct InterfaceCircuit {
    direction: InterfaceDirection,
    /// Encoder (encode direction) or inverse encoder + discards (decode).
    segment: CliffordCircuit,
    gadget: EcGadget,
}

/// Build the interface circuit for a direction.
pub fn interface_circuit(code: &StabilizerCode, direction: InterfaceDirection) -> InterfaceCircuit {
    let mut segment = CliffordCircuit::new(21);
    let gates = match direction {
        InterfaceDirection::Encode => encoder_gates(),
        InterfaceDirection::Decode => inverse_encoder_gates(),
    };
    for g in gates {
        segment.push(g);
    }
    InterfaceCircuit {
        direction,
        segment,
        gadget: ec_gadget(code),
    }
}

/// Outcome of one simulated interface run.
#[derive(Debug, Clone, Copy)]
pub struct InterfaceOutcome {
    /// Residual data-block frame after the final EC (encode direction) or
    /// the post-EC frame before the inverse encoder (decode direction).
    pub residual_x: u64,
    pub residual_z: u64,
    /// Decode direction only: the error on the output qubit.
    pub output: Option<LogicalLabel>,
    /// Whether the run is correct in the interface sense.
    pub correct: bool,
}

impl InterfaceCircuit {
    pub fn direction(&self) -> InterfaceDirection {
        self.direction
    }

    pub fn segment(&self) -> &CliffordCircuit {
        &self.segment
    }

    pub fn gadget(&self) -> &EcGadget {
        &self.gadget
    }

    /// |Loc| of the whole interface circuit.
    pub fn location_count(&self) -> usize {
        self.segment.location_count() + self.gadget.location_count()
    }

    /// |Loc(DecI o EC)| pairs the decode interface with a leading EC; the
    /// encode interface already ends in its EC.
    pub fn location_count_with_leading_ec(&self) -> usize {
        match self.direction {
            InterfaceDirection::Encode => self.location_count(),
            InterfaceDirection::Decode => self.location_count() + self.gadget.location_count(),
        }
    }

    /// Simulate one run under a fault provider. Site indices: the gadget
    /// owns [0, gadget sites) and the segment follows, regardless of
    /// direction, so that enumeration covers both.
    ///
    /// Encode: input error enters on [`IO_QUBIT`]; correct iff the residual
    /// after the final EC has trivial logical component relative to the
    /// input.
    ///
    /// Decode: correct iff the output-qubit error matches the logical
    /// content of the post-EC frame.
    pub fn simulate<FP>(
        &self,
        code: &StabilizerCode,
        input_x: u64,
        input_z: u64,
        fault_at: &mut FP,
    ) -> InterfaceOutcome
    where
        FP: FnMut(usize) -> Option<PauliKind>,
    {
        match self.direction {
            InterfaceDirection::Encode => {
                let gadget_sites = self.gadget.location_count();
                let mut x = input_x;
                let mut z = input_z;
                // segment sites follow the gadget's in the global index space
                let mut seg_faults = |s: usize| fault_at(gadget_sites + s);
                self.segment
                    .run_all(&mut x, &mut z, &mut seg_faults, &mut |_, _| {});
                let out = self.gadget.simulate(code, x, z, fault_at);
                // the incoming physical error on IO_QUBIT becomes the same
                // logical label; correctness demands the residual logical
                // match it
                let expected = LogicalLabel::from_bits(input_x & 1 << IO_QUBIT != 0, {
                    input_z & 1 << IO_QUBIT != 0
                });
                let (label, _) = code.decode_masks(out.residual_x, out.residual_z);
                InterfaceOutcome {
                    residual_x: out.residual_x,
                    residual_z: out.residual_z,
                    output: None,
                    correct: label == expected,
                }
            }
            InterfaceDirection::Decode => {
                let (content, _) = code.decode_masks(input_x & 0x7F, input_z & 0x7F);
                let out = self.gadget.simulate(code, input_x, input_z, fault_at);
                let gadget_sites = self.gadget.location_count();
                let mut x = out.residual_x;
                let mut z = out.residual_z;
                let mut seg_faults = |s: usize| fault_at(gadget_sites + s);
                self.segment
                    .run_all(&mut x, &mut z, &mut seg_faults, &mut |_, _| {});
                let bit = 1u64 << IO_QUBIT;
                let output = LogicalLabel::from_bits(x & bit != 0, z & bit != 0);
                InterfaceOutcome {
                    residual_x: out.residual_x,
                    residual_z: out.residual_z,
                    output: Some(output),
                    correct: output == content,
                }
            }
        }
    }
}

/// Calibrated default for the code-threshold parameter entering the
/// interface constant. Conservative for this gadget family: the resulting
/// first-order bound 2cp dominates the measured failure coefficients of
/// both interface directions with margin. Order-of-magnitude only; every
/// entry point accepts a user-supplied p0.
pub const STEANE_P0_DEFAULT: f64 = 0.06;

/// Interface constant c = p0 * max(|Loc(EncI)|, |Loc(DecI o EC)|).
pub fn interface_constant(code: &StabilizerCode, p0: f64) -> f64 {
    let enc = interface_circuit(code, InterfaceDirection::Encode);
    let dec = interface_circuit(code, InterfaceDirection::Decode);
    let max_loc = enc
        .location_count_with_leading_ec()
        .max(dec.location_count_with_leading_ec());
    p0 * max_loc as f64
}
