//! Finite-difference validation of the analytic objective gradient.

use crate::objective::{ea_objective, ea_objective_gradient};
use crate::{CapacityError, Result};
use ftcap_core::linalg::CMatrix;
use ftcap_core::{DensityMatrix, QuantumChannel};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Random trace-zero Hermitian direction with unit Frobenius norm.
fn random_direction(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = ftcap_core::random::ginibre(d, d, rng);
    let mut h = (&g + g.adjoint()).scale(0.5);
    let shift = h.trace() / Complex64::new(d as f64, 0.0);
    for i in 0..d {
        h[(i, i)] -= shift;
    }
    let n = frobenius(&h);
    h.scale(1.0 / n)
}

/// Compare the analytic gradient of [`ea_objective`] against central finite
/// differences along `directions` random trace-zero Hermitian directions.
/// Returns the worst absolute deviation.
///
/// Requires the state to be strictly positive: min eigenvalue > 10 h, so the
/// perturbed points stay inside the state set.
pub fn gradient_check(
    t: &QuantumChannel,
    rho: &DensityMatrix,
    h: f64,
    directions: usize,
    seed: u64,
) -> Result<f64> {
    if h <= 0.0 {
        return Err(CapacityError::Precondition("h must be positive".into()));
    }
    let min_eig = rho.min_eigenvalue();
    if min_eig <= 10.0 * h {
        return Err(CapacityError::Precondition(format!(
            "state too close to singular: min eigenvalue {min_eig} <= 10 h = {}",
            10.0 * h
        )));
    }
    let grad = ea_objective_gradient(rho, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..directions {
        let dir = random_direction(rho.dim(), &mut rng);
        let analytic: f64 = grad
            .iter()
            .zip(dir.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        let plus =
            DensityMatrix::new_unchecked(rho.entries() + dir.scale(h), rho.factors().to_vec());
        let minus =
            DensityMatrix::new_unchecked(rho.entries() - dir.scale(h), rho.factors().to_vec());
        let numeric = (ea_objective(&plus, t)? - ea_objective(&minus, t)?) / (2.0 * h);
        worst = worst.max((analytic - numeric).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interior_state(d: usize, seed: u64) -> DensityMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = ftcap_core::random::random_density(d, &mut rng);
        DensityMatrix::new_unchecked(
            noise.entries().scale(0.5) + ftcap_core::linalg::identity(d).scale(0.5 / d as f64),
            vec![d],
        )
    }

    #[test]
    fn identity_channel_at_maximally_mixed() {
        let t = QuantumChannel::identity(2);
        let rho = DensityMatrix::maximally_mixed(2);
        let dev = gradient_check(&t, &rho, 1e-4, 20, 7).unwrap();
        assert!(dev < 1e-5, "deviation {dev}");
    }

    #[test]
    fn depolarizing_at_random_interior_state() {
        let t = QuantumChannel::depolarizing(0.3);
        let rho = interior_state(2, 11);
        let dev = gradient_check(&t, &rho, 1e-4, 20, 13).unwrap();
        assert!(dev < 1e-5, "deviation {dev}");
    }

    #[test]
    fn deviation_shrinks_with_h() {
        // central differences are second order: halving h should cut the
        // truncation error by about 4; allow slack for round-off
        let t = QuantumChannel::depolarizing(0.3);
        let rho = interior_state(2, 17);
        let d1 = gradient_check(&t, &rho, 2e-3, 20, 19).unwrap();
        let d2 = gradient_check(&t, &rho, 1e-3, 20, 19).unwrap();
        assert!(d2 < d1, "d(h/2) = {d2} not below d(h) = {d1}");
        assert!(
            d2 * 2.0 < d1 + 1e-12,
            "expected roughly O(h^2) decay: {d1} -> {d2}"
        );
    }

    #[test]
    fn near_singular_state_is_rejected() {
        let t = QuantumChannel::identity(2);
        let rho = DensityMatrix::from_pure(&ftcap_core::PureState::basis(2, 0));
        assert!(gradient_check(&t, &rho, 1e-4, 5, 1).is_err());
    }
}
