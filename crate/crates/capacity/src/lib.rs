//! Capacity optimization: the entanglement-assisted mutual-information
//! objective, projected concave ascent over input states, and a Holevo
//! lower bound on the classical capacity.

pub mod gradcheck;
pub mod holevo;
pub mod objective;
pub mod optimizer;

pub use gradcheck::gradient_check;
pub use holevo::classical_capacity_lb;
pub use objective::{ea_objective, ea_objective_gradient};
pub use optimizer::ea_capacity;

use ftcap_core::DensityMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CapacityError {
    #[error(transparent)]
    Core(#[from] ftcap_core::CoreError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, CapacityError>;

/// Outcome of a capacity optimization.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    /// Best objective value found, in bits.
    pub value: f64,
    /// Optimizing (reduced) channel input.
    pub optimal_input: DensityMatrix,
    /// Total ascent iterations spent, across restarts.
    pub iterations: usize,
    /// Whether the projected gradient norm fell below tolerance.
    pub converged: bool,
    /// Final projected gradient norm (Frobenius).
    pub gradient_norm: f64,
}
