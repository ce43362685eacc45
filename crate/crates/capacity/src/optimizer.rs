//! Projected gradient ascent for the entanglement-assisted capacity.
//!
//! The objective is concave in the reduced input state, so ascent over the
//! PSD unit-trace set finds the supremum; the returned value is always a
//! certified lower bound on C^ea.

use crate::objective::{ea_objective, ea_objective_gradient};
use crate::{CapacityError, CapacityResult, Result};
use ftcap_core::linalg::{hermitian_eigen, CMatrix};
use ftcap_core::{DensityMatrix, QuantumChannel};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ARMIJO: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;
const RESTARTS: usize = 5;

/// Project a Hermitian matrix onto the PSD unit-trace set by eigenvalue
/// clipping and trace renormalization.
fn project_state(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let clipped: Vec<f64> = vals.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let n = vals.len();
    let mut diag = CMatrix::zeros(n, n);
    if total <= 0.0 {
        // degenerate projection target; fall back to the maximally mixed state
        for i in 0..n {
            diag[(i, i)] = Complex64::new(1.0 / n as f64, 0.0);
        }
        return diag;
    }
    for i in 0..n {
        diag[(i, i)] = Complex64::new(clipped[i] / total, 0.0);
    }
    &vecs * diag * vecs.adjoint()
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

struct AscentOutcome {
    rho: DensityMatrix,
    value: f64,
    gradient_norm: f64,
    iterations: usize,
    converged: bool,
}

fn ascend(
    t: &QuantumChannel,
    start: DensityMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<AscentOutcome> {
    let mut rho = start;
    let mut value = ea_objective(&rho, t)?;
    let mut step = 1.0f64;
    let mut gradient_norm = f64::INFINITY;
    for it in 0..max_iter {
        let g = ea_objective_gradient(&rho, t)?;
        gradient_norm = frobenius(&g);
        if gradient_norm < tol {
            return Ok(AscentOutcome {
                rho,
                value,
                gradient_norm,
                iterations: it,
                converged: true,
            });
        }
        // backtracking line search with Armijo acceptance on the projected step
        let mut accepted = false;
        let mut s = step;
        for _ in 0..MAX_BACKTRACKS {
            let cand_m = project_state(&(rho.entries() + g.scale(s)));
            let delta = &cand_m - rho.entries();
            let move_norm = frobenius(&delta);
            if move_norm < 1e-16 {
                break;
            }
            let cand = DensityMatrix::new_unchecked(cand_m, rho.factors().to_vec());
            let cand_value = ea_objective(&cand, t)?;
            let inner: f64 = g
                .iter()
                .zip(delta.iter())
                .map(|(a, b)| (a.conj() * b).re)
                .sum();
            if cand_value >= value + ARMIJO * inner {
                rho = cand;
                value = cand_value;
                accepted = true;
                step = (s * 2.0).min(1.0e3);
                break;
            }
            s *= SHRINK;
        }
        if !accepted {
            // no admissible step; report the current point
            return Ok(AscentOutcome {
                rho,
                value,
                gradient_norm,
                iterations: it + 1,
                converged: gradient_norm < tol,
            });
        }
    }
    Ok(AscentOutcome {
        rho,
        value,
        gradient_norm,
        iterations: max_iter,
        converged: false,
    })
}

/// Maximize [`ea_objective`] over input states by projected ascent.
///
/// Starts from the maximally mixed state and restarts from random interior
/// states when the first run fails to converge. Restart results reduce
/// deterministically: highest value wins, ties broken by lowest restart
/// index.
pub fn ea_capacity(
    t: &QuantumChannel,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<CapacityResult> {
    if tol <= 0.0 {
        return Err(CapacityError::Precondition("tol must be positive".into()));
    }
    let d = t.dim_in();
    let first = ascend(t, DensityMatrix::maximally_mixed(d), tol, max_iter)?;
    let mut total_iter = first.iterations;
    let mut best = first;
    if !best.converged {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RESTARTS {
            let noise = ftcap_core::random::random_density(d, &mut rng);
            let start = DensityMatrix::new_unchecked(
                noise.entries().scale(0.5) + ftcap_core::linalg::identity(d).scale(0.5 / d as f64),
                vec![d],
            );
            let run = ascend(t, start, tol, max_iter)?;
            total_iter += run.iterations;
            let better = run.value > best.value + 1e-12
                || (run.converged && !best.converged && run.value >= best.value - 1e-9);
            if better {
                best = run;
            }
            if best.converged {
                break;
            }
        }
    }
    Ok(CapacityResult {
        // round-off on a zero-capacity channel can land epsilon-negative
        value: best.value.max(0.0),
        optimal_input: best.rho,
        iterations: total_iter,
        converged: best.converged,
        gradient_norm: best.gradient_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ftcap_core::linalg::identity;

    #[test]
    fn identity_channel_reaches_two_bits() {
        let t = QuantumChannel::identity(2);
        let r = ea_capacity(&t, 1e-8, 500, 1).unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-6, "value {}", r.value);
        let dev = r
            .optimal_input
            .trace_distance(&DensityMatrix::maximally_mixed(2))
            .unwrap();
        assert!(dev < 1e-6);
    }

    #[test]
    fn fully_depolarizing_is_zero() {
        let t = QuantumChannel::fully_depolarizing();
        let r = ea_capacity(&t, 1e-8, 500, 1).unwrap();
        assert!(r.value.abs() < 1e-6);
    }

    #[test]
    fn depolarizing_matches_isotropic_entropy_oracle() {
        let t = QuantumChannel::depolarizing(0.1);
        let r = ea_capacity(&t, 1e-8, 500, 1).unwrap();
        let oracle = 2.0 - (-(0.925f64) * 0.925f64.log2() - 3.0 * 0.025 * 0.025f64.log2());
        assert!((r.value - oracle).abs() < 1e-4, "value {}", r.value);
        // covariant channel: optimizer returns the maximally mixed input
        let dev = r
            .optimal_input
            .trace_distance(&DensityMatrix::maximally_mixed(2))
            .unwrap();
        assert!(dev < 1e-4);
    }

    #[test]
    fn nontrivial_channel_converges_from_boundary_restarts() {
        // amplitude-damping-like channel: optimum is an interior non-mixed state
        let g: f64 = 0.3;
        let mut k0 = CMatrix::zeros(2, 2);
        k0[(0, 0)] = Complex64::new(1.0, 0.0);
        k0[(1, 1)] = Complex64::new((1.0 - g).sqrt(), 0.0);
        let mut k1 = CMatrix::zeros(2, 2);
        k1[(0, 1)] = Complex64::new(g.sqrt(), 0.0);
        let t = QuantumChannel::new(vec![k0, k1]).unwrap();
        let r = ea_capacity(&t, 1e-7, 2000, 3).unwrap();
        assert!(r.converged, "gradient norm {}", r.gradient_norm);
        // C^ea of amplitude damping(0.3) is strictly between 1 and 2
        assert!(r.value > 1.0 && r.value < 2.0, "value {}", r.value);
        // ascent from the mixed state must not report a worse value than the
        // objective at the mixed state itself
        let base = ea_objective(&DensityMatrix::maximally_mixed(2), &t).unwrap();
        assert!(r.value >= base - 1e-10);
    }

    #[test]
    fn data_processing_under_unitary_precomposition() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let t = QuantumChannel::depolarizing(0.25);
        let base = ea_capacity(&t, 1e-8, 500, 1).unwrap().value;
        for _ in 0..3 {
            let u = ftcap_core::random::random_unitary(2, &mut rng);
            let u_ch = QuantumChannel::new(vec![u]).unwrap();
            let composed = t.compose(&u_ch).unwrap();
            let v = ea_capacity(&composed, 1e-8, 500, 1).unwrap().value;
            assert!((v - base).abs() < 1e-4, "{v} vs {base}");
        }
    }

    #[test]
    fn entanglement_assistance_never_hurts() {
        // ea_capacity(T) >= classical_capacity_lb(T) - 1e-6 across the
        // builtin test channels
        for t in [
            QuantumChannel::identity(2),
            QuantumChannel::depolarizing(0.1),
            QuantumChannel::depolarizing(0.3),
            QuantumChannel::dephasing(0.3),
            QuantumChannel::erasure(0.25),
            QuantumChannel::fully_depolarizing(),
        ] {
            let ea = ea_capacity(&t, 1e-7, 1000, 1).unwrap().value;
            let cl = crate::classical_capacity_lb(&t, 0, 1e-7, 200, 1)
                .unwrap()
                .value;
            assert!(ea >= cl - 1e-6, "ea {ea} below classical lb {cl}");
        }
    }

    #[test]
    fn project_state_clips_and_renormalizes() {
        let mut m = identity(2);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        let p = project_state(&m);
        assert!((p[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(p[(1, 1)].re.abs() < 1e-12);
    }
}
