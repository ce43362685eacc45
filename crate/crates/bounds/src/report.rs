//! Resource-rate report and the itemized bound evaluation used by the CLI.

use crate::scalar::{f1, f2, f2_substituted, ft_ea_capacity_lb, r_ea_required, F1Variant};
use crate::{BoundParams, BoundsError, Result};
use ftcap_core::QuantumChannel;
use serde::Serialize;

/// Asymptotic resource trade-off coefficients: entanglement consumed per
/// channel use and classical bits produced per channel use.
#[derive(Debug, Clone, Serialize)]
pub struct ResourceReport {
    /// Entanglement consumption H(A) / (1 - h(4cp) - 4cp log2 3) in
    /// Bell pairs per channel use.
    pub qq_rate: f64,
    /// Achievable classical rate (the capacity lower bound).
    pub cc_rate: f64,
    /// Entropy of the optimizing input.
    pub h_a: f64,
    /// Faultless mutual information at the optimizer.
    pub i_ab: f64,
    pub cea: f64,
    pub c_classical: f64,
}

/// Emits the resource-inequality coefficients at gate error p. At p = 0 the
/// standard trade-off (qq = H(A), cc = I(A':B)) is reproduced.
pub fn resource_report(
    t: &QuantumChannel,
    p: f64,
    params: &BoundParams,
    seed: u64,
) -> Result<ResourceReport> {
    let cea_res = ftcap_capacity::ea_capacity(t, 1e-7, 2000, seed)?;
    let c_res = ftcap_capacity::classical_capacity_lb(t, 0, 1e-7, 300, seed)?;
    if c_res.value <= 0.0 {
        return Err(BoundsError::InvalidArgument(
            "resource_report: classical-capacity lower bound is zero".into(),
        ));
    }
    let h_a = cea_res.optimal_input.von_neumann_entropy();
    let qq_rate = h_a * r_ea_required(p, params.c)?;
    let cc_rate = ft_ea_capacity_lb(
        p,
        params.c,
        params.j1,
        params.j2,
        cea_res.value,
        c_res.value,
        F1Variant::Theorem,
    )?;
    Ok(ResourceReport {
        qq_rate,
        cc_rate,
        h_a,
        i_ab: cea_res.value,
        cea: cea_res.value,
        c_classical: c_res.value,
    })
}

/// Fully itemized bound evaluation: inputs echoed, every term, both f1
/// variants, both f2 readings, clamp flags.
#[derive(Debug, Clone, Serialize)]
pub struct BoundBreakdown {
    pub params: BoundParams,
    pub cea: f64,
    pub c_classical: f64,
    pub f1_theorem: f64,
    pub f1_proof: f64,
    pub f2_printed: f64,
    pub f2_printed_clamped: bool,
    pub f2_substituted: f64,
    pub f2_substituted_clamped: bool,
    pub distillation_term: f64,
    pub lower_bound: f64,
    pub r_ea: f64,
}

pub fn bound_breakdown(params: &BoundParams, cea: f64, c_classical: f64) -> Result<BoundBreakdown> {
    let p = params.p;
    let f1_theorem = f1(p, params.c, params.j2, F1Variant::Theorem)?;
    let f1_proof = f1(p, params.c, params.j2, F1Variant::Proof)?;
    let f2p = f2(p, params.c, params.j1, params.j2)?;
    let f2s = f2_substituted(p, params.c, params.j1, params.j2)?;
    let distillation_term = 4.0 * f1_theorem * cea / c_classical;
    let lower_bound = ft_ea_capacity_lb(
        p,
        params.c,
        params.j1,
        params.j2,
        cea,
        c_classical,
        F1Variant::Theorem,
    )?;
    Ok(BoundBreakdown {
        params: params.clone(),
        cea,
        c_classical,
        f1_theorem,
        f1_proof,
        f2_printed: f2p.value,
        f2_printed_clamped: f2p.clamped,
        f2_substituted: f2s.value,
        f2_substituted_clamped: f2s.clamped,
        distillation_term,
        lower_bound,
        r_ea: r_ea_required(p, params.c)?,
    })
}
