//! The i.i.d. Pauli fault model: each location independently suffers an
//! X, Y or Z fault with probability p/3 each.

use crate::circuit::CliffordCircuit;
use crate::pauli::PauliKind;
use crate::{Result, StabilizerError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// An assignment of Pauli faults to circuit locations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultPattern {
    faults: BTreeMap<usize, PauliKind>,
    total_locations: usize,
}

impl FaultPattern {
    pub fn new(faults: BTreeMap<usize, PauliKind>, total_locations: usize) -> Result<Self> {
        if faults.keys().any(|&loc| loc >= total_locations) {
            return Err(StabilizerError::InvalidArgument(
                "fault location beyond total_locations".into(),
            ));
        }
        Ok(Self {
            faults,
            total_locations,
        })
    }

    pub fn empty(total_locations: usize) -> Self {
        Self {
            faults: BTreeMap::new(),
            total_locations,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.faults.is_empty()
    }

    pub fn len(&self) -> usize {
        self.faults.len()
    }

    pub fn total_locations(&self) -> usize {
        self.total_locations
    }

    pub fn get(&self, location: usize) -> Option<PauliKind> {
        self.faults.get(&location).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, PauliKind)> + '_ {
        self.faults.iter().map(|(&l, &k)| (l, k))
    }
}

/// Draw one fault per location independently with probability p, the type
/// uniform over {X, Y, Z}. CNOT locations are two independent sites, one
/// per output qubit.
pub fn sample_fault_pattern(circuit: &CliffordCircuit, p: f64, seed: u64) -> Result<FaultPattern> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StabilizerError::InvalidArgument(format!(
            "fault probability {p} outside [0,1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut faults = BTreeMap::new();
    for site in 0..circuit.location_count() {
        if let Some(kind) = draw_fault(&mut rng, p) {
            faults.insert(site, kind);
        }
    }
    Ok(FaultPattern {
        faults,
        total_locations: circuit.location_count(),
    })
}

/// One Bernoulli(p) draw plus a uniform type draw on success.
#[inline]
pub fn draw_fault<R: Rng>(rng: &mut R, p: f64) -> Option<PauliKind> {
    if p <= 0.0 {
        return None;
    }
    let u: f64 = rng.random();
    if u >= p {
        return None;
    }
    // reuse the residual uniform for the type
    let t = (u / p * 3.0) as usize;
    Some(match t {
        0 => PauliKind::X,
        1 => PauliKind::Y,
        _ => PauliKind::Z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn ten_location_circuit() -> CliffordCircuit {
        let mut c = CliffordCircuit::new(1);
        for _ in 0..10 {
            c.push(Gate::Wait(0));
        }
        c
    }

    #[test]
    fn zero_probability_gives_empty_pattern() {
        let c = ten_location_circuit();
        for seed in 0..20 {
            assert!(sample_fault_pattern(&c, 0.0, seed).unwrap().is_empty());
        }
    }

    #[test]
    fn empty_pattern_frequency_matches_binomial_oracle() {
        let c = ten_location_circuit();
        let samples = 100_000u64;
        let empty = (0..samples)
            .filter(|&s| sample_fault_pattern(&c, 0.1, s).unwrap().is_empty())
            .count();
        let rate = empty as f64 / samples as f64;
        let oracle = 0.9f64.powi(10);
        assert!(
            (rate - oracle).abs() < 0.005,
            "P(empty) = {rate} vs oracle {oracle}"
        );
    }

    #[test]
    fn per_type_marginals_are_uniform_thirds() {
        let c = ten_location_circuit();
        let p = 0.3;
        let samples = 30_000u64;
        let mut counts = [0u64; 3];
        let mut site_hits = 0u64;
        for s in 0..samples {
            let pat = sample_fault_pattern(&c, p, s).unwrap();
            for (_, kind) in pat.iter() {
                site_hits += 1;
                match kind {
                    PauliKind::X => counts[0] += 1,
                    PauliKind::Y => counts[1] += 1,
                    PauliKind::Z => counts[2] += 1,
                }
            }
        }
        let expected = site_hits as f64 / 3.0;
        let sigma = (site_hits as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - expected).abs() < 3.0 * sigma,
                "type {i}: {c} vs {expected} (3 sigma = {})",
                3.0 * sigma
            );
        }
        // per-location marginal: total faults / (samples * locations) ~ p
        let marginal = site_hits as f64 / (samples as f64 * 10.0);
        assert!((marginal - p).abs() < 0.01, "marginal {marginal}");
    }

    #[test]
    fn pattern_rejects_out_of_range_locations() {
        let mut m = BTreeMap::new();
        m.insert(12usize, PauliKind::X);
        assert!(FaultPattern::new(m, 10).is_err());
    }
}
