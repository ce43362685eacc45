//! Clifford circuits as flat gate lists with an explicit fault-site
//! enumeration, and the Pauli-frame runner.
//!
//! Fault convention: single-qubit gates and preparations carry one fault
//! site after the gate; measurements and discards one site before; a CNOT
//! carries two independent single-qubit sites (control and target) after
//! the gate. The location count is the number of fault sites.

use crate::pauli::PauliKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Gate {
    /// Identity (storage) step.
    Wait(usize),
    PrepZ(usize),
    H(usize),
    /// Pauli gate; acts trivially on the error frame.
    Pauli(usize, PauliKind),
    Cnot(usize, usize),
    MeasureZ(usize),
    Discard(usize),
}

impl Gate {
    fn site_count(&self) -> usize {
        match self {
            Gate::Cnot(..) => 2,
            _ => 1,
        }
    }
}

/// A fault insertion point: one single-qubit Pauli channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultSite {
    pub gate_index: usize,
    pub qubit: usize,
    /// True when the channel acts before the gate (measurement, discard).
    pub before: bool,
}

#[derive(Debug, Clone)]
pub struct CliffordCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    /// First fault-site index of each gate.
    site_offsets: Vec<usize>,
    total_sites: usize,
}

impl CliffordCircuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits <= 64, "frame masks are 64-bit");
        Self {
            n_qubits,
            gates: Vec::new(),
            site_offsets: Vec::new(),
            total_sites: 0,
        }
    }

    pub fn push(&mut self, gate: Gate) -> usize {
        let idx = self.gates.len();
        self.site_offsets.push(self.total_sites);
        self.total_sites += gate.site_count();
        self.gates.push(gate);
        idx
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of fault-insertion points (quantum locations).
    pub fn location_count(&self) -> usize {
        self.total_sites
    }

    pub fn fault_sites(&self) -> Vec<FaultSite> {
        let mut sites = Vec::with_capacity(self.total_sites);
        for (gi, g) in self.gates.iter().enumerate() {
            match *g {
                Gate::Cnot(c, t) => {
                    sites.push(FaultSite {
                        gate_index: gi,
                        qubit: c,
                        before: false,
                    });
                    sites.push(FaultSite {
                        gate_index: gi,
                        qubit: t,
                        before: false,
                    });
                }
                Gate::MeasureZ(q) | Gate::Discard(q) => sites.push(FaultSite {
                    gate_index: gi,
                    qubit: q,
                    before: true,
                }),
                Gate::Wait(q) | Gate::PrepZ(q) | Gate::H(q) | Gate::Pauli(q, _) => {
                    sites.push(FaultSite {
                        gate_index: gi,
                        qubit: q,
                        before: false,
                    })
                }
            }
        }
        sites
    }

    /// Execute a gate range on a Pauli frame.
    ///
    /// `fault_at(site)` supplies the fault for a site index (visited in
    /// order); `on_measure(gate_index, flipped)` receives each MeasureZ
    /// outcome flip relative to the ideal run.
    pub fn run_range<FP, FM>(
        &self,
        range: std::ops::Range<usize>,
        x: &mut u64,
        z: &mut u64,
        fault_at: &mut FP,
        on_measure: &mut FM,
    ) where
        FP: FnMut(usize) -> Option<PauliKind>,
        FM: FnMut(usize, bool),
    {
        for gi in range {
            let site = self.site_offsets[gi];
            match self.gates[gi] {
                Gate::Wait(q) | Gate::Pauli(q, _) => {
                    inject(x, z, q, fault_at(site));
                }
                Gate::PrepZ(q) => {
                    let bit = 1u64 << q;
                    *x &= !bit;
                    *z &= !bit;
                    inject(x, z, q, fault_at(site));
                }
                Gate::H(q) => {
                    let bit = 1u64 << q;
                    let xb = *x & bit != 0;
                    let zb = *z & bit != 0;
                    if xb != zb {
                        *x ^= bit;
                        *z ^= bit;
                    }
                    inject(x, z, q, fault_at(site));
                }
                Gate::Cnot(c, t) => {
                    if *x & (1 << c) != 0 {
                        *x ^= 1 << t;
                    }
                    if *z & (1 << t) != 0 {
                        *z ^= 1 << c;
                    }
                    inject(x, z, c, fault_at(site));
                    inject(x, z, t, fault_at(site + 1));
                }
                Gate::MeasureZ(q) => {
                    inject(x, z, q, fault_at(site));
                    on_measure(gi, *x & (1 << q) != 0);
                }
                Gate::Discard(q) => {
                    inject(x, z, q, fault_at(site));
                    let bit = 1u64 << q;
                    *x &= !bit;
                    *z &= !bit;
                }
            }
        }
    }

    pub fn run_all<FP, FM>(&self, x: &mut u64, z: &mut u64, fault_at: &mut FP, on_measure: &mut FM)
    where
        FP: FnMut(usize) -> Option<PauliKind>,
        FM: FnMut(usize, bool),
    {
        self.run_range(0..self.gates.len(), x, z, fault_at, on_measure);
    }
}

#[inline]
fn inject(x: &mut u64, z: &mut u64, q: usize, fault: Option<PauliKind>) {
    if let Some(kind) = fault {
        let bit = 1u64 << q;
        match kind {
            PauliKind::X => *x ^= bit,
            PauliKind::Z => *z ^= bit,
            PauliKind::Y => {
                *x ^= bit;
                *z ^= bit;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_fault(_: usize) -> Option<PauliKind> {
        None
    }

    #[test]
    fn location_counting_follows_the_convention() {
        let mut c = CliffordCircuit::new(2);
        c.push(Gate::PrepZ(0));
        c.push(Gate::H(0));
        c.push(Gate::Cnot(0, 1));
        c.push(Gate::MeasureZ(1));
        c.push(Gate::Discard(0));
        assert_eq!(c.location_count(), 6);
        assert_eq!(c.fault_sites().len(), 6);
    }

    #[test]
    fn frame_propagation_rules() {
        // X on control spreads through CNOT; Z on target spreads back
        let mut c = CliffordCircuit::new(2);
        c.push(Gate::Cnot(0, 1));
        let (mut x, mut z) = (0b01u64, 0b10u64);
        c.run_all(&mut x, &mut z, &mut no_fault, &mut |_, _| {});
        assert_eq!(x, 0b11);
        assert_eq!(z, 0b11);

        // H swaps the components
        let mut c = CliffordCircuit::new(1);
        c.push(Gate::H(0));
        let (mut x, mut z) = (1u64, 0u64);
        c.run_all(&mut x, &mut z, &mut no_fault, &mut |_, _| {});
        assert_eq!((x, z), (0, 1));
        // Y stays Y under H
        let (mut x, mut z) = (1u64, 1u64);
        c.run_all(&mut x, &mut z, &mut no_fault, &mut |_, _| {});
        assert_eq!((x, z), (1, 1));
    }

    #[test]
    fn measurement_flips_on_x_component() {
        let mut c = CliffordCircuit::new(1);
        c.push(Gate::MeasureZ(0));
        let mut flips = Vec::new();
        let (mut x, mut z) = (1u64, 0u64);
        c.run_all(&mut x, &mut z, &mut no_fault, &mut |gi, f| {
            flips.push((gi, f))
        });
        assert_eq!(flips, vec![(0, true)]);
        let (mut x, mut z) = (0u64, 1u64);
        let mut flips = Vec::new();
        c.run_all(&mut x, &mut z, &mut no_fault, &mut |gi, f| {
            flips.push((gi, f))
        });
        assert_eq!(flips, vec![(0, false)]);
    }

    #[test]
    fn forced_fault_injection() {
        let mut c = CliffordCircuit::new(1);
        c.push(Gate::Wait(0));
        let (mut x, mut z) = (0u64, 0u64);
        let mut fp = |site: usize| (site == 0).then_some(PauliKind::Y);
        c.run_all(&mut x, &mut z, &mut fp, &mut |_, _| {});
        assert_eq!((x, z), (1, 1));
    }
}
