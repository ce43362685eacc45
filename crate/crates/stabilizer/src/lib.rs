//! Pauli-frame simulation of the 7-qubit code under i.i.d. Pauli faults:
//! fault-pattern sampling, syndrome extraction, the ideal decoder, a
//! verified error-correction gadget, encode/decode interfaces, and seeded
//! Monte Carlo estimates of logical and interface failure rates.
//!
//! All circuits here are Clifford with stabilizer-state inputs, so the
//! difference between the faulty and ideal run is a Pauli frame tracked as
//! a pair of bit masks per register.

pub mod circuit;
pub mod code;
pub mod config;
pub mod fault;
pub mod gadget;
pub mod interface;
pub mod mc;
pub mod pauli;

pub use circuit::{CliffordCircuit, Gate};
pub use code::{LogicalLabel, StabilizerCode};
pub use fault::{sample_fault_pattern, FaultPattern};
pub use gadget::{ec_gadget, EcGadget, GadgetOutcome};
pub use interface::{interface_circuit, InterfaceCircuit, InterfaceDirection};
pub use mc::{mc_interface_failure, mc_logical_error_rate, Estimate};
pub use pauli::{PauliKind, PauliString};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StabilizerError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
}

pub type Result<T> = std::result::Result<T, StabilizerError>;
