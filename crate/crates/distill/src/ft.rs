//! Distillation error bounds and their fault-tolerant composition.

use crate::{DistillError, Result};
use ftcap_bounds::threshold_scaling;

/// Typicality-width grid for the free parameter of the composite error:
/// 32 log-spaced points. The bound is minimized over this grid.
const DELTA_GRID_MIN: f64 = 1e-3;
const DELTA_GRID_MAX: f64 = 4.0;
const DELTA_GRID_POINTS: usize = 32;

/// Distillation error bound
/// 2 exp(-k d^2 / ln^2(q/3)) + sqrt(2 sqrt(3) exp(-k d^2 / (2 ln^2(q/3)))).
///
/// The logarithm of q/3 inside the exponentials is natural, as printed;
/// the surrounding entropies elsewhere stay base 2.
pub fn eps_dist(q: f64, k: u64, delta: f64) -> Result<f64> {
    if q <= 0.0 || q >= 1.0 {
        return Err(DistillError::InvalidArgument(format!(
            "eps_dist: q = {q} must lie strictly inside (0,1)"
        )));
    }
    if delta <= 0.0 || k == 0 {
        return Err(DistillError::InvalidArgument(
            "eps_dist: need delta > 0 and k >= 1".into(),
        ));
    }
    let log_q3 = (q / 3.0).ln();
    let denom = log_q3 * log_q3;
    let kf = k as f64;
    let term1 = 2.0 * (-kf * delta * delta / denom).exp();
    let term2 = (2.0 * 3f64.sqrt() * (-kf * delta * delta / (2.0 * denom)).exp()).sqrt();
    Ok(term1 + term2)
}

/// Composite fault-tolerant distillation error and the policy choices that
/// produced it.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct FtDistillError {
    pub value: f64,
    /// Grid-minimizing typicality width.
    pub delta: f64,
    pub scaling_term: f64,
    pub dist_term: f64,
    pub finite_size_term: f64,
}

/// Threshold-scaling term + sqrt(eps_dist(4cp, k, delta)) + 2/k, with delta
/// chosen as the grid argmin of the composite. Defined as exactly 0 at
/// p = 0, where perfect pairs need no distillation.
pub fn ft_distill_error(
    p: f64,
    k: u64,
    c: f64,
    p0: f64,
    level: u32,
    loc_dist: u64,
) -> Result<FtDistillError> {
    if k == 0 {
        return Err(DistillError::InvalidArgument("k must be positive".into()));
    }
    if p < 0.0 || p > p0 / 2.0 {
        return Err(DistillError::OutOfDomain(format!(
            "ft_distill_error: p = {p} outside [0, p0/2 = {}]",
            p0 / 2.0
        )));
    }
    if p == 0.0 {
        return Ok(FtDistillError {
            value: 0.0,
            delta: 0.0,
            scaling_term: 0.0,
            dist_term: 0.0,
            finite_size_term: 0.0,
        });
    }
    let q = 4.0 * c * p;
    if q >= 1.0 {
        return Err(DistillError::OutOfDomain(format!(
            "ft_distill_error: 4cp = {q} >= 1"
        )));
    }
    let scaling = threshold_scaling(p, p0, level, loc_dist)?;
    let finite_size = 2.0 / k as f64;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..DELTA_GRID_POINTS {
        let t = i as f64 / (DELTA_GRID_POINTS - 1) as f64;
        let delta = DELTA_GRID_MIN * (DELTA_GRID_MAX / DELTA_GRID_MIN).powf(t);
        let e = eps_dist(q, k, delta)?;
        if e < best.0 {
            best = (e, delta);
        }
    }
    let dist_term = best.0.sqrt();
    Ok(FtDistillError {
        value: scaling + dist_term + finite_size,
        delta: best.1,
        scaling_term: scaling,
        dist_term,
        finite_size_term: finite_size,
    })
}
