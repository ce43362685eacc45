//! Numeric check of the postselection domination
//! T_{p,N}^{(x)n}(. x sigma_S)  <=  d_B^{n(p+dt)} T_p^{(x)n} + e^{-n dt^2/(3p)} S
//! for a completely positive remainder S, at the level of Choi matrices.

use crate::effective::effective_channel;
use crate::{BoundsError, Result};
use ftcap_core::linalg::{hermitian_eigenvalues, kron, matrix_unit, permute_factors, CMatrix};
use ftcap_core::{DensityMatrix, QuantumChannel};
use rand::Rng;
use serde::Serialize;

/// Outcome of one postselection check.
#[derive(Debug, Clone, Serialize)]
pub struct PostselectReport {
    /// Most negative eigenvalue of Choi(Delta).
    pub min_eig: f64,
    /// Sum of the negative eigenvalues of Choi(Delta).
    pub negative_sum: f64,
    /// Allowance exp(-n dt^2/(3p)) d_A^n (zero at p = 0: exact CP check).
    pub bound: f64,
    pub holds: bool,
}

/// Forms Delta = d_B^{n(p+dt)} T_p^{(x)n} - T_{p,N}^{(x)n}(. x sigma_S) and
/// reports the negative part of its Choi matrix against the allowance
/// consistent with a CP remainder of Choi trace d_A^n.
pub fn postselect_check(
    t: &QuantumChannel,
    p: f64,
    n_channel: &QuantumChannel,
    sigma_s: &DensityMatrix,
    n: usize,
    delta_tilde: f64,
) -> Result<PostselectReport> {
    if !(1..=2).contains(&n) {
        return Err(BoundsError::InvalidArgument(format!(
            "postselect_check: n = {n} not in {{1, 2}}"
        )));
    }
    if delta_tilde < 0.0 {
        return Err(BoundsError::InvalidArgument(
            "postselect_check: negative delta_tilde".into(),
        ));
    }
    let d_a = t.dim_in();
    let d_b = t.dim_out();
    if !n_channel.dim_in().is_multiple_of(d_a) {
        return Err(BoundsError::Core(ftcap_core::CoreError::DimensionMismatch(
            "perturbation input must factor as d_A * d_S".into(),
        )));
    }
    let d_s = n_channel.dim_in() / d_a;
    if sigma_s.dim() != d_s.pow(n as u32) {
        return Err(BoundsError::Core(ftcap_core::CoreError::DimensionMismatch(
            format!(
                "syndrome state dim {} vs d_S^n = {}",
                sigma_s.dim(),
                d_s.pow(n as u32)
            ),
        )));
    }

    // smoothed channel T_p = (1-p) T + p (I/d_B) Tr
    let replace = QuantumChannel::trace_and_replace(d_a, d_b);
    let t_p = QuantumChannel::convex(t, 1.0 - p, &replace, p)?;
    let eff = effective_channel(t, p, n_channel, d_s)?;

    let din = d_a.pow(n as u32);
    let dout = d_b.pow(n as u32);
    let scale = (d_b as f64).powf(n as f64 * (p + delta_tilde));

    // n-fold tensor maps
    let t_p_n = if n == 1 {
        t_p.clone()
    } else {
        t_p.tensor(&t_p)
    };
    let eff_n = if n == 1 {
        eff.clone()
    } else {
        eff.tensor(&eff)
    };

    // interleave (A1..An, S1..Sn) -> (A1, S1, A2, S2, ...) for the effective map
    let mut dims = vec![d_a; n];
    dims.extend(std::iter::repeat_n(d_s, n));
    let mut perm = Vec::with_capacity(2 * n);
    for i in 0..n {
        perm.push(i);
        perm.push(n + i);
    }

    let total = dout * din;
    let mut choi_delta = CMatrix::zeros(total, total);
    for i in 0..din {
        for j in 0..din {
            let e_ij = matrix_unit(din, i, j);
            let lhs = t_p_n.apply_matrix(&e_ij).scale(scale);
            let joint = kron(&e_ij, sigma_s.entries());
            let interleaved = if n == 1 {
                joint
            } else {
                permute_factors(&joint, &dims, &perm)
            };
            let rhs = eff_n.apply_matrix(&interleaved);
            choi_delta += kron(&(lhs - rhs), &matrix_unit(din, i, j));
        }
    }

    let eigs = hermitian_eigenvalues(&choi_delta);
    let min_eig = eigs[0];
    let negative_sum: f64 = eigs.iter().filter(|&&l| l < 0.0).sum();
    let bound = if p == 0.0 {
        0.0
    } else {
        (-(n as f64) * delta_tilde * delta_tilde / (3.0 * p)).exp() * din as f64
    };
    Ok(PostselectReport {
        min_eig,
        negative_sum,
        bound,
        holds: negative_sum >= -bound - 1e-8,
    })
}

/// Random adversarial draw for the checker: a Haar–Stinespring perturbation
/// channel on (d_A, d_S) and a random (possibly entangled) syndrome state on
/// d_S^n.
pub fn random_perturbation<R: Rng>(
    t: &QuantumChannel,
    d_s: usize,
    n: usize,
    rng: &mut R,
) -> (QuantumChannel, DensityMatrix) {
    let n_ch = ftcap_core::random::random_channel(t.dim_in() * d_s, t.dim_out(), 4, rng);
    let sigma = ftcap_core::random::random_density(d_s.pow(n as u32), rng);
    let sigma = sigma
        .with_factors(vec![d_s; n])
        .expect("dimension is d_s^n by construction");
    (n_ch, sigma)
}
