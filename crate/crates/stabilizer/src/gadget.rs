//! Steane-style error correction gadget with single-shot ancilla
//! verification.
//!
//! Round 1 detects X errors: a |+>_L ancilla block is verified against a
//! second |+>_L block, then coupled as the target of a transversal CNOT
//! from the data and measured in the Z basis. Round 2 detects Z errors
//! with a verified |0>_L block coupled as the control and measured in the
//! X basis. A round whose verifier rejects is skipped for that trial; the
//! corrections for both rounds are applied to the Pauli frame at the end
//! through the minimum-weight lookup over the 64 syndrome classes.
//!
//! Verification is what keeps single faults from injecting weight-2
//! equivalent errors into the data block: any dangerous ancilla error is
//! either a stabilizer of its block or flips the verifier parity checks.

use crate::circuit::{CliffordCircuit, Gate};
use crate::code::{LogicalLabel, StabilizerCode};
use crate::pauli::PauliKind;
use std::ops::Range;

/// Hamming parity-check rows as 7-bit masks (0-indexed qubits).
const ROWS: [u64; 3] = [0x78, 0x66, 0x55];
/// Generator-matrix pivots of the rows.
const PIVOTS: [usize; 3] = [3, 1, 0];
/// Row targets per pivot.
const TARGETS: [[usize; 3]; 3] = [[4, 5, 6], [2, 5, 6], [2, 4, 6]];

pub(crate) fn hamming_syndrome(mask: u64) -> usize {
    let mut s = 0usize;
    for (i, row) in ROWS.iter().enumerate() {
        if (mask & row).count_ones() & 1 == 1 {
            s |= 1 << i;
        }
    }
    s
}

/// Accept iff the measured flip pattern lies in the even Hamming subcode.
pub(crate) fn verifier_accepts(flips: u64) -> bool {
    hamming_syndrome(flips) == 0 && flips.count_ones() & 1 == 0
}

/// Append the |0>_L encoder onto the 7 qubits starting at `base`.
fn push_prep_zero(c: &mut CliffordCircuit, base: usize) {
    for q in 0..7 {
        c.push(Gate::PrepZ(base + q));
    }
    for &p in &PIVOTS {
        c.push(Gate::H(base + p));
    }
    for (row, &p) in PIVOTS.iter().enumerate() {
        for &t in &TARGETS[row] {
            c.push(Gate::Cnot(base + p, base + t));
        }
    }
}

fn push_transversal_h(c: &mut CliffordCircuit, base: usize) {
    for q in 0..7 {
        c.push(Gate::H(base + q));
    }
}

fn push_transversal_cnot(c: &mut CliffordCircuit, control_base: usize, target_base: usize) {
    for q in 0..7 {
        c.push(Gate::Cnot(control_base + q, target_base + q));
    }
}

fn push_measure_block(c: &mut CliffordCircuit, base: usize) -> Range<usize> {
    let start = c.gates().len();
    for q in 0..7 {
        c.push(Gate::MeasureZ(base + q));
    }
    start..start + 7
}

const DATA: usize = 0;
const ANC: usize = 7;
const VERIF: usize = 14;

/// The gadget circuit plus the classical execution plan.
#[derive(Debug, Clone)]
pub struct EcGadget {
    circuit: CliffordCircuit,
    r1_static: Range<usize>,
    r1_cond: Range<usize>,
    r2_static: Range<usize>,
    r2_cond: Range<usize>,
    b1_meas: Range<usize>,
    a1_meas: Range<usize>,
    b2_meas: Range<usize>,
    a2_meas: Range<usize>,
}

/// Result of simulating one gadget round on a data frame.
#[derive(Debug, Clone, Copy)]
pub struct GadgetOutcome {
    /// Residual data-block frame after corrections (7-bit masks).
    pub residual_x: u64,
    pub residual_z: u64,
    /// Verifier acceptance per round.
    pub accept1: bool,
    pub accept2: bool,
    /// Packed 6-bit syndrome fed to the lookup decoder.
    pub syndrome: usize,
}

impl GadgetOutcome {
    pub fn logical(&self, code: &StabilizerCode) -> LogicalLabel {
        code.decode_masks(self.residual_x, self.residual_z).0
    }
}

/// Build the error-correction gadget for the 7-qubit code.
pub fn ec_gadget(_code: &StabilizerCode) -> EcGadget {
    let mut c = CliffordCircuit::new(21);

    // ---- round 1: X-error detection with verified |+>_L ----
    let r1_start = c.gates().len();
    push_prep_zero(&mut c, ANC);
    push_transversal_h(&mut c, ANC); // A1 = |+>_L
    push_prep_zero(&mut c, VERIF);
    push_transversal_h(&mut c, VERIF); // B1 = |+>_L
    push_transversal_cnot(&mut c, VERIF, ANC); // copies A1 Z errors onto B1
    push_transversal_h(&mut c, VERIF); // X-basis readout of B1
    let b1_meas = push_measure_block(&mut c, VERIF);
    let r1_static = r1_start..c.gates().len();

    let cond_start = c.gates().len();
    push_transversal_cnot(&mut c, DATA, ANC); // copies data X errors onto A1
    let a1_meas = push_measure_block(&mut c, ANC);
    let r1_cond = cond_start..c.gates().len();

    // ---- round 2: Z-error detection with verified |0>_L ----
    let r2_start = c.gates().len();
    push_prep_zero(&mut c, ANC); // A2 = |0>_L
    push_prep_zero(&mut c, VERIF); // B2 = |0>_L
    push_transversal_cnot(&mut c, ANC, VERIF); // copies A2 X errors onto B2
    let b2_meas = push_measure_block(&mut c, VERIF);
    let r2_static = r2_start..c.gates().len();

    let cond_start = c.gates().len();
    push_transversal_cnot(&mut c, ANC, DATA); // copies data Z errors onto A2
    push_transversal_h(&mut c, ANC); // X-basis readout of A2
    let a2_meas = push_measure_block(&mut c, ANC);
    let r2_cond = cond_start..c.gates().len();

    EcGadget {
        circuit: c,
        r1_static,
        r1_cond,
        r2_static,
        r2_cond,
        b1_meas,
        a1_meas,
        b2_meas,
        a2_meas,
    }
}

impl EcGadget {
    pub fn circuit(&self) -> &CliffordCircuit {
        &self.circuit
    }

    /// Deterministic fault-site count of the gadget.
    pub fn location_count(&self) -> usize {
        self.circuit.location_count()
    }

    /// Run one gadget round on an input data frame. `fault_at` is consulted
    /// once per executed fault site, in circuit order; sites of a skipped
    /// round are not consulted.
    pub fn simulate<FP>(
        &self,
        code: &StabilizerCode,
        input_x: u64,
        input_z: u64,
        fault_at: &mut FP,
    ) -> GadgetOutcome
    where
        FP: FnMut(usize) -> Option<PauliKind>,
    {
        let mut x = input_x & 0x7F;
        let mut z = input_z & 0x7F;

        let mut b1_flips = 0u64;
        let mut a1_flips = 0u64;
        let mut b2_flips = 0u64;
        let mut a2_flips = 0u64;

        {
            let b1 = self.b1_meas.clone();
            let mut record = |gi: usize, f: bool| {
                if f && b1.contains(&gi) {
                    b1_flips |= 1 << (gi - b1.start);
                }
            };
            self.circuit.run_range(
                self.r1_static.clone(),
                &mut x,
                &mut z,
                fault_at,
                &mut record,
            );
        }
        let accept1 = verifier_accepts(b1_flips);
        let mut s_from_x_errors = 0usize;
        if accept1 {
            let a1 = self.a1_meas.clone();
            let mut record = |gi: usize, f: bool| {
                if f && a1.contains(&gi) {
                    a1_flips |= 1 << (gi - a1.start);
                }
            };
            self.circuit
                .run_range(self.r1_cond.clone(), &mut x, &mut z, fault_at, &mut record);
            s_from_x_errors = hamming_syndrome(a1_flips);
        }

        {
            let b2 = self.b2_meas.clone();
            let mut record = |gi: usize, f: bool| {
                if f && b2.contains(&gi) {
                    b2_flips |= 1 << (gi - b2.start);
                }
            };
            self.circuit.run_range(
                self.r2_static.clone(),
                &mut x,
                &mut z,
                fault_at,
                &mut record,
            );
        }
        let accept2 = verifier_accepts(b2_flips);
        let mut s_from_z_errors = 0usize;
        if accept2 {
            let a2 = self.a2_meas.clone();
            let mut record = |gi: usize, f: bool| {
                if f && a2.contains(&gi) {
                    a2_flips |= 1 << (gi - a2.start);
                }
            };
            self.circuit
                .run_range(self.r2_cond.clone(), &mut x, &mut z, fault_at, &mut record);
            s_from_z_errors = hamming_syndrome(a2_flips);
        }

        // syndrome bits 0..3 are the X-generator checks (they flag Z errors),
        // bits 3..6 the Z-generator checks (X errors); minimum-weight lookup
        // then updates the frame
        let syndrome = s_from_z_errors | (s_from_x_errors << 3);
        let rep = code.representative(syndrome);
        x ^= rep.x_bits();
        z ^= rep.z_bits();

        GadgetOutcome {
            residual_x: x & 0x7F,
            residual_z: z & 0x7F,
            accept1,
            accept2,
            syndrome,
        }
    }
}
