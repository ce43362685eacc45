//! Holevo-quantity lower bound on the classical capacity, by alternating
//! ascent over pure-state ensembles.

use crate::{CapacityError, CapacityResult, Result};
use ftcap_core::linalg::{hermitian_map, spectrum_entropy_bits, CMatrix, CVector};
use ftcap_core::{DensityMatrix, PureState, QuantumChannel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LOG_FLOOR: f64 = 1e-18;
const RANDOM_INITS: usize = 4;

fn log2_floored(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |x| x.max(LOG_FLOOR).log2())
}

struct Ensemble {
    probs: Vec<f64>,
    states: Vec<CVector>,
}

impl Ensemble {
    fn average_output(&self, t: &QuantumChannel) -> CMatrix {
        let mut avg = CMatrix::zeros(t.dim_out(), t.dim_out());
        for (p, s) in self.probs.iter().zip(&self.states) {
            let proj = s * s.adjoint();
            avg += t.apply_matrix(&proj).scale(*p);
        }
        avg
    }

    fn holevo(&self, t: &QuantumChannel) -> f64 {
        let avg = self.average_output(t);
        let mut chi = spectrum_entropy_bits(&avg);
        for (p, s) in self.probs.iter().zip(&self.states) {
            if *p <= 0.0 {
                continue;
            }
            let out = t.apply_matrix(&(s * s.adjoint()));
            chi -= p * spectrum_entropy_bits(&out);
        }
        chi
    }

    /// Blahut–Arimoto probability update for fixed states; never decreases chi.
    fn update_probs(&mut self, t: &QuantumChannel) {
        let avg = self.average_output(t);
        let log_avg = log2_floored(&avg);
        let mut weights = Vec::with_capacity(self.probs.len());
        let mut divergences = Vec::with_capacity(self.probs.len());
        for s in &self.states {
            let out = t.apply_matrix(&(s * s.adjoint()));
            // D(out || avg) in bits = -H(out) - Tr out log2 avg
            let d = -spectrum_entropy_bits(&out) - (&out * &log_avg).trace().re;
            divergences.push(d);
        }
        let dmax = divergences
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        for (p, d) in self.probs.iter().zip(&divergences) {
            weights.push(p * (d - dmax).exp2());
        }
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            for (p, w) in self.probs.iter_mut().zip(&weights) {
                *p = w / total;
            }
        }
    }

    /// One projected-gradient pass over the states; keeps the update only if
    /// chi improves.
    fn update_states(&mut self, t: &QuantumChannel, step: f64) -> bool {
        let avg = self.average_output(t);
        let log_avg = log2_floored(&avg);
        let current = self.holevo(t);
        let mut candidate = Ensemble {
            probs: self.probs.clone(),
            states: self.states.clone(),
        };
        for (i, s) in self.states.iter().enumerate() {
            if self.probs[i] <= 1e-12 {
                continue;
            }
            let out = t.apply_matrix(&(s * s.adjoint()));
            let m = t.apply_adjoint_matrix(&(log2_floored(&out) - &log_avg));
            let mut dir = &m * s;
            // tangent projection on the sphere
            let overlap = s.dotc(&dir);
            dir -= s * overlap;
            let norm = dir.norm();
            if norm < 1e-14 {
                continue;
            }
            let updated = s + dir.scale(step / norm.max(1.0));
            let n = updated.norm();
            candidate.states[i] = updated.scale(1.0 / n);
        }
        let improved = candidate.holevo(t) > current + 1e-14;
        if improved {
            self.states = candidate.states;
        }
        improved
    }
}

fn basis_init(t: &QuantumChannel, ensemble_size: usize) -> Ensemble {
    let d = t.dim_in();
    let states = (0..ensemble_size)
        .map(|i| ftcap_core::linalg::basis_vector(d, i % d))
        .collect();
    Ensemble {
        probs: vec![1.0 / ensemble_size as f64; ensemble_size],
        states,
    }
}

fn random_init(t: &QuantumChannel, ensemble_size: usize, rng: &mut ChaCha8Rng) -> Ensemble {
    let d = t.dim_in();
    let states = (0..ensemble_size)
        .map(|_| ftcap_core::random::random_pure(d, rng).amplitudes().clone())
        .collect();
    Ensemble {
        probs: vec![1.0 / ensemble_size as f64; ensemble_size],
        states,
    }
}

/// Maximize the Holevo quantity over ensembles of `ensemble_size` pure
/// inputs with probabilities; the best value found is a valid lower bound
/// on the classical capacity C(T).
///
/// Pass `ensemble_size = 0` to use the default d_in^2 (sufficient by
/// Caratheodory-type dimension counting).
pub fn classical_capacity_lb(
    t: &QuantumChannel,
    ensemble_size: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<CapacityResult> {
    let ensemble_size = if ensemble_size == 0 {
        t.dim_in() * t.dim_in()
    } else {
        ensemble_size
    };
    if ensemble_size < 2 {
        return Err(CapacityError::Precondition(
            "ensemble_size must be at least 2".into(),
        ));
    }
    if tol <= 0.0 {
        return Err(CapacityError::Precondition("tol must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inits = vec![basis_init(t, ensemble_size)];
    for _ in 0..RANDOM_INITS {
        inits.push(random_init(t, ensemble_size, &mut rng));
    }

    let mut best_value = f64::NEG_INFINITY;
    let mut best_ensemble: Option<Ensemble> = None;
    let mut best_converged = false;
    let mut best_gap = f64::INFINITY;
    let mut total_iter = 0usize;

    for mut ens in inits {
        let mut chi = ens.holevo(t);
        let mut converged = false;
        let mut last_gap = f64::INFINITY;
        let mut step = 0.5f64;
        for _ in 0..max_iter {
            total_iter += 1;
            ens.update_probs(t);
            let improved_states = ens.update_states(t, step);
            if !improved_states {
                step *= 0.5;
            }
            let next = ens.holevo(t);
            last_gap = (next - chi).abs();
            chi = next.max(chi);
            if last_gap < tol * 1e-2 && step < 1e-6 {
                converged = true;
                break;
            }
            if last_gap < tol * 1e-3 {
                converged = true;
                break;
            }
        }
        if chi > best_value + 1e-12 {
            best_value = chi;
            best_converged = converged;
            best_gap = last_gap;
            best_ensemble = Some(ens);
        }
    }

    let ens = best_ensemble.expect("at least one init");
    let d = t.dim_in();
    let mut avg_in = CMatrix::zeros(d, d);
    for (p, s) in ens.probs.iter().zip(&ens.states) {
        avg_in += (s * s.adjoint()).scale(*p);
    }
    // symmetrize round-off before wrapping
    let avg_in = (&avg_in + avg_in.adjoint()).scale(0.5);
    let tr = avg_in.trace().re;
    Ok(CapacityResult {
        value: best_value.max(0.0),
        optimal_input: DensityMatrix::new_unchecked(avg_in.scale(1.0 / tr), vec![d]),
        iterations: total_iter,
        converged: best_converged,
        gradient_norm: best_gap,
    })
}

/// Holevo quantity of an explicit ensemble; exposed for tests and reports.
pub fn holevo_quantity(t: &QuantumChannel, probs: &[f64], states: &[PureState]) -> Result<f64> {
    if probs.len() != states.len() || probs.is_empty() {
        return Err(CapacityError::Precondition(
            "ensemble shape mismatch".into(),
        ));
    }
    let ens = Ensemble {
        probs: probs.to_vec(),
        states: states.iter().map(|s| s.amplitudes().clone()).collect(),
    };
    Ok(ens.holevo(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_channel_transmits_one_bit() {
        let t = QuantumChannel::identity(2);
        let r = classical_capacity_lb(&t, 0, 1e-8, 200, 1).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "value {}", r.value);
    }

    #[test]
    fn depolarizing_matches_antipodal_ensemble_oracle() {
        // two-state antipodal ensemble oracle, known optimal for depolarizing:
        // chi = 1 - h(lambda/2)
        let lambda = 0.1f64;
        let t = QuantumChannel::depolarizing(lambda);
        let x = lambda / 2.0;
        let oracle = 1.0 - (-x * x.log2() - (1.0 - x) * (1.0 - x).log2());
        let r = classical_capacity_lb(&t, 0, 1e-8, 200, 1).unwrap();
        assert!(
            (r.value - oracle).abs() < 1e-6,
            "value {} oracle {oracle}",
            r.value
        );
        assert!((r.value - 0.71360).abs() < 1e-5);
    }

    #[test]
    fn fully_depolarizing_carries_nothing() {
        let t = QuantumChannel::fully_depolarizing();
        let r = classical_capacity_lb(&t, 0, 1e-8, 100, 1).unwrap();
        assert!(r.value.abs() < 1e-6);
    }

    #[test]
    fn explicit_ensemble_helper_agrees() {
        let t = QuantumChannel::identity(2);
        let chi = holevo_quantity(
            &t,
            &[0.5, 0.5],
            &[PureState::basis(2, 0), PureState::basis(2, 1)],
        )
        .unwrap();
        assert!((chi - 1.0).abs() < 1e-12);
    }
}
