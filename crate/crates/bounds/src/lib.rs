//! Closed-form fault-tolerance bounds: penalty functions for perturbed
//! entanglement-assisted coding, effective-channel construction, a numeric
//! postselection check, threshold search, and the resource-rate report.

pub mod effective;
pub mod postselect;
pub mod report;
pub mod scalar;
pub mod threshold;

pub use effective::effective_channel;
pub use ftcap_core::binary_entropy;
pub use postselect::{postselect_check, random_perturbation, PostselectReport};
pub use report::{resource_report, ResourceReport};
pub use scalar::{
    alpha, eps_ea, eta, f1, f2, f2_substituted, f_avp, ft_distill_scaling_term, ft_ea_capacity_lb,
    level_choice, mi_continuity_bound, r_ea_required, threshold_scaling, Evaluated, F1Variant,
};
pub use threshold::{threshold_find, ThresholdResult};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Core(#[from] ftcap_core::CoreError),
    #[error(transparent)]
    Capacity(#[from] ftcap_capacity::CapacityError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
}

pub type Result<T> = std::result::Result<T, BoundsError>;

/// Scalar bundle feeding the closed-form bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundParams {
    /// Gate error probability.
    pub p: f64,
    /// Code threshold.
    pub p0: f64,
    /// Interface constant (p0 times the larger interface location count).
    pub c: f64,
    /// Concatenation level.
    pub l: u32,
    /// Channel input qubit count.
    pub j1: u32,
    /// Channel output qubit count.
    pub j2: u32,
    pub loc_enc: u64,
    pub loc_dec: u64,
    pub loc_dist: u64,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            p: 0.0,
            p0: 1e-3,
            c: 10.0,
            l: 1,
            j1: 1,
            j2: 1,
            loc_enc: 0,
            loc_dec: 0,
            loc_dist: 1000,
        }
    }
}

impl BoundParams {
    /// Largest p admitted by the effective-channel theorem:
    /// p <= min(p0/2, 1/(2 c (j1+j2))).
    pub fn effective_domain_cap(&self) -> f64 {
        let j = (self.j1 + self.j2) as f64;
        (self.p0 / 2.0).min(1.0 / (2.0 * self.c * j))
    }

    pub fn check_effective_domain(&self) -> Result<()> {
        if self.p < 0.0 || self.p > self.effective_domain_cap() {
            return Err(BoundsError::OutOfDomain(format!(
                "p = {} outside [0, {}]",
                self.p,
                self.effective_domain_cap()
            )));
        }
        Ok(())
    }
}

/// Parameter bundle of the perturbed coding-error bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AvpParams {
    pub p: f64,
    pub d_a: usize,
    pub d_b: usize,
    pub delta: f64,
    pub delta_tilde: f64,
    pub lambda_min: f64,
    pub n: u64,
    pub rate: f64,
}
