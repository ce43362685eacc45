//! Classical simulation and bound evaluation for one-way hashing
//! distillation on Bell-diagonal pair states, the fault-tolerant error
//! composition, and the superdense-coding consumer.

pub mod bell;
pub mod ft;
pub mod hashing;

pub use bell::{effective_pair_state, phi_q, superdense_fidelity, BellDiagonalState};
pub use ft::{eps_dist, ft_distill_error, FtDistillError};
pub use hashing::{hashing_sim, DistillRun, HashingReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DistillError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error(transparent)]
    Bounds(#[from] ftcap_bounds::BoundsError),
}

pub type Result<T> = std::result::Result<T, DistillError>;
