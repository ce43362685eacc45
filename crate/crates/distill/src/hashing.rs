//! Monte Carlo simulation of the one-way hashing protocol.
//!
//! Per trial the 2k-bit error string of k i.i.d. Bell-diagonal pairs is
//! sampled, m = ceil((H+delta) k) uniformly random parities of it are
//! drawn (the classical message of the protocol), and the trial fails if
//! the string is not delta-typical: the empirical surprisal per pair falls
//! outside H +- delta. This estimates the concentration term of the
//! distillation error; the hash-collision contribution is the analytic
//! union bound 2^{-k delta} over the typical set and is reported, not
//! simulated.

use crate::bell::BellDiagonalState;
use crate::{DistillError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

const CHUNK: u64 = 64;

/// Parameters of one hashing-distillation run.
#[derive(Debug, Clone)]
pub struct DistillRun {
    pub state: BellDiagonalState,
    pub k: usize,
    pub delta: f64,
    /// Parity count m = ceil((H + delta) k).
    pub m: usize,
    pub seed: u64,
}

impl DistillRun {
    pub fn new(state: BellDiagonalState, k: usize, delta: f64, seed: u64) -> Result<Self> {
        if k == 0 || k > 200_000 {
            return Err(DistillError::InvalidArgument(format!(
                "k = {k} outside [1, 2e5]"
            )));
        }
        if delta <= 0.0 {
            return Err(DistillError::InvalidArgument(
                "delta must be positive".into(),
            ));
        }
        let m = ((state.entropy() + delta) * k as f64).ceil() as usize;
        if m > 2 * k {
            return Err(DistillError::InvalidArgument(format!(
                "parity count m = {m} exceeds 2k = {}",
                2 * k
            )));
        }
        Ok(Self {
            state,
            k,
            delta,
            m,
            seed,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HashingReport {
    /// Monte Carlo estimate of the atypicality probability (the simulated
    /// failure mode; identical to `empirical_failure`).
    pub p_atypical: f64,
    pub stderr: f64,
    /// Analytic union bound 2^{-k delta} on hash collisions within the
    /// typical set.
    pub p_collision_bound: f64,
    /// Fraction of failed trials.
    pub empirical_failure: f64,
    pub trials: u64,
    pub failures: u64,
    /// True when the trial budget is too small for the stderr to mean much.
    pub low_trials_warning: bool,
    /// Order-independent digest of all communicated parity bits; pins the
    /// sampled protocol transcript for reproducibility checks.
    pub parity_checksum: u64,
}

fn mix_seed(seed: u64, chunk: u64) -> u64 {
    let mut v = seed ^ chunk.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    v = (v ^ (v >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    v = (v ^ (v >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    v ^ (v >> 31)
}

/// One trial: returns (atypical, parity digest).
fn run_trial(run: &DistillRun, rng: &mut ChaCha8Rng) -> (bool, u64) {
    let k = run.k;
    let probs = run.state.probs();
    let cumulative = [
        probs[0],
        probs[0] + probs[1],
        probs[0] + probs[1] + probs[2],
    ];
    let surprisals = probs.map(|p| if p > 0.0 { -p.log2() } else { 0.0 });

    let words = (2 * k).div_ceil(64);
    let mut string = vec![0u64; words];
    let mut total_surprisal = 0.0;
    for i in 0..k {
        let u: f64 = rng.random();
        let class = if u < cumulative[0] {
            0
        } else if u < cumulative[1] {
            1
        } else if u < cumulative[2] {
            2
        } else {
            3
        };
        total_surprisal += surprisals[class];
        // amplitude bit at position i, phase bit at k + i
        let (amp, phase) = match class {
            0 => (0u64, 0u64),
            1 => (1, 0),
            2 => (0, 1),
            _ => (1, 1),
        };
        if amp == 1 {
            string[i / 64] |= 1 << (i % 64);
        }
        if phase == 1 {
            let j = k + i;
            string[j / 64] |= 1 << (j % 64);
        }
    }

    // random parities of the string: the one-way classical message
    let mut digest = 0u64;
    let tail_mask = if (2 * k).is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << ((2 * k) % 64)) - 1
    };
    for parity_index in 0..run.m {
        let mut acc = 0u64;
        for (w, s) in string.iter().enumerate() {
            let mut mask: u64 = rng.random();
            if w == words - 1 {
                mask &= tail_mask;
            }
            acc ^= mask & s;
        }
        let bit = (acc.count_ones() & 1) as u64;
        digest ^= bit.rotate_left((parity_index % 64) as u32);
        digest = digest.wrapping_mul(0x100000001B3).wrapping_add(bit);
    }

    let entropy = run.state.entropy();
    let atypical = (total_surprisal / k as f64 - entropy).abs() > run.delta;
    (atypical, digest)
}

/// Run the hashing simulation for `trials` independent protocol instances.
pub fn hashing_sim(run: &DistillRun, trials: u64) -> Result<HashingReport> {
    if trials == 0 {
        return Err(DistillError::InvalidArgument("zero trials".into()));
    }
    let n_chunks = trials.div_ceil(CHUNK);
    let (failures, checksum) = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(run.seed, chunk));
            let in_chunk = CHUNK.min(trials - chunk * CHUNK);
            let mut fails = 0u64;
            let mut digest = 0u64;
            for _ in 0..in_chunk {
                let (atypical, d) = run_trial(run, &mut rng);
                if atypical {
                    fails += 1;
                }
                digest ^= d;
            }
            (fails, digest)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 ^ b.1));

    let rate = failures as f64 / trials as f64;
    Ok(HashingReport {
        p_atypical: rate,
        stderr: (rate * (1.0 - rate) / trials as f64).sqrt(),
        p_collision_bound: (-(run.k as f64) * run.delta).exp2(),
        empirical_failure: rate,
        trials,
        failures,
        low_trials_warning: trials < 100,
        parity_checksum: checksum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::phi_q;
    use crate::ft::eps_dist;

    #[test]
    fn pure_input_never_fails() {
        let run = DistillRun::new(phi_q(0.0).unwrap(), 1000, 0.05, 3).unwrap();
        let r = hashing_sim(&run, 200).unwrap();
        assert_eq!(r.failures, 0);
        assert_eq!(r.empirical_failure, 0.0);
    }

    #[test]
    fn atypicality_drops_with_k() {
        let q = 0.05;
        let delta = 0.05;
        let small = hashing_sim(
            &DistillRun::new(phi_q(q).unwrap(), 1000, delta, 5).unwrap(),
            400,
        )
        .unwrap();
        let large = hashing_sim(
            &DistillRun::new(phi_q(q).unwrap(), 10_000, delta, 5).unwrap(),
            400,
        )
        .unwrap();
        // non-overlapping 3 sigma, with the k = 1e4 estimate pinned near zero
        assert!(
            small.p_atypical - 3.0 * small.stderr > large.p_atypical + 3.0 * large.stderr,
            "k=1e3: {} +- {}, k=1e4: {} +- {}",
            small.p_atypical,
            small.stderr,
            large.p_atypical,
            large.stderr
        );
    }

    #[test]
    fn empirical_never_exceeds_eps_dist_bound_sampled() {
        // subset of the acceptance grid at unit-test budget
        for &(q, k, delta) in &[
            (0.05, 1_000usize, 0.05),
            (0.1, 10_000, 0.1),
            (0.01, 1_000, 0.02),
        ] {
            let run = DistillRun::new(phi_q(q).unwrap(), k, delta, 11).unwrap();
            let r = hashing_sim(&run, 200).unwrap();
            let bound = eps_dist(q, k as u64, delta).unwrap();
            assert!(
                r.p_atypical <= bound,
                "q={q} k={k} delta={delta}: {} > {bound}",
                r.p_atypical
            );
        }
    }

    #[test]
    fn reproducible_bit_exactly_under_fixed_seed() {
        let run = DistillRun::new(phi_q(0.05).unwrap(), 2000, 0.05, 17).unwrap();
        let a = hashing_sim(&run, 150).unwrap();
        let b = hashing_sim(&run, 150).unwrap();
        assert_eq!(a.failures, b.failures);
        assert_eq!(a.parity_checksum, b.parity_checksum);
        let run2 = DistillRun::new(phi_q(0.05).unwrap(), 2000, 0.05, 18).unwrap();
        let c = hashing_sim(&run2, 150).unwrap();
        assert_ne!(a.parity_checksum, c.parity_checksum);
    }

    #[test]
    fn low_trial_budget_is_flagged() {
        let run = DistillRun::new(phi_q(0.05).unwrap(), 500, 0.05, 1).unwrap();
        let r = hashing_sim(&run, 50).unwrap();
        assert!(r.low_trials_warning);
    }

    #[test]
    fn run_validation() {
        assert!(DistillRun::new(phi_q(0.05).unwrap(), 0, 0.05, 1).is_err());
        assert!(DistillRun::new(phi_q(0.05).unwrap(), 100, 0.0, 1).is_err());
        // m > 2k: entropy + delta above 2
        let uniform = BellDiagonalState::new([0.25; 4]).unwrap();
        assert!(DistillRun::new(uniform, 100, 0.5, 1).is_err());
    }
}
