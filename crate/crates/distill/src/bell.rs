//! Bell-diagonal pair states as probability 4-vectors.
//!
//! Basis ordering is fixed once here: (phi+, psi+, phi-, psi-) identified
//! with error bit-pairs (amplitude, phase) = (00, 10, 01, 11), i.e. with
//! the Pauli classes (I, X, Z, Y) applied to one half of phi+.

use crate::{DistillError, Result};
use serde::{Deserialize, Serialize};

/// Index of each Bell component in the probability vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellComponent {
    PhiPlus = 0,
    PsiPlus = 1,
    PhiMinus = 2,
    PsiMinus = 3,
}

/// Probability 4-vector over the Bell basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalState {
    probs: [f64; 4],
}

impl BellDiagonalState {
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        if probs.iter().any(|&p| p < 0.0 || p.is_nan()) {
            return Err(DistillError::InvalidArgument(
                "negative Bell-component probability".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(DistillError::InvalidArgument(format!(
                "Bell probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64; 4] {
        &self.probs
    }

    /// Weight on phi+ (the error-free component).
    pub fn p_identity(&self) -> f64 {
        self.probs[0]
    }

    /// Shannon entropy of the probability vector, in bits.
    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }

    /// Distillable fraction max(0, 1 - H) per input pair; 0 carries a
    /// vacuity meaning (the protocol yields nothing).
    pub fn yield_fraction(&self) -> f64 {
        (1.0 - self.entropy()).max(0.0)
    }
}

/// phi_q = (1-q) phi+ + q/3 (phi- + psi+ + psi-).
pub fn phi_q(q: f64) -> Result<BellDiagonalState> {
    if !(0.0..=1.0).contains(&q) {
        return Err(DistillError::InvalidArgument(format!(
            "phi_q: q = {q} outside [0,1]"
        )));
    }
    BellDiagonalState::new([1.0 - q, q / 3.0, q / 3.0, q / 3.0])
}

/// Post-interface, post-twirl pair state phi_{4cp}.
pub fn effective_pair_state(p: f64, c: f64) -> Result<BellDiagonalState> {
    let q = 4.0 * c * p;
    if q > 0.75 {
        return Err(DistillError::OutOfDomain(format!(
            "effective_pair_state: 4cp = {q} exceeds 3/4"
        )));
    }
    phi_q(q)
}

/// Probability that two classical bits sent by superdense coding over a
/// shared Bell-diagonal pair are recovered: the phi+ weight.
pub fn superdense_fidelity(state: &BellDiagonalState) -> f64 {
    state.p_identity()
}
