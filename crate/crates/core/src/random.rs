//! Seeded random quantum objects for tests, property sweeps and the
//! postselection checker.

use crate::channel::QuantumChannel;
use crate::density::DensityMatrix;
use crate::linalg::{CMatrix, CVector};
use crate::pure::PureState;
use num_complex::Complex64;
use rand::Rng;

/// Standard complex Gaussian matrix.
pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        // Box-Muller; two uniforms per complex entry
        let u1: f64 = rng.random::<f64>().max(1e-18);
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        Complex64::new(r * theta.cos(), r * theta.sin()) / Complex64::new(2f64.sqrt(), 0.0)
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase fixing.
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    // normalize column phases so the distribution is Haar
    for j in 0..d {
        let diag = r[(j, j)];
        if diag.norm() > 0.0 {
            let phase = diag / Complex64::new(diag.norm(), 0.0);
            for i in 0..d {
                q[(i, j)] *= phase.conj();
            }
        }
    }
    q
}

/// Full-rank random density matrix G G' / Tr on a single factor.
pub fn random_density<R: Rng>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new_unchecked(m.scale(1.0 / tr), vec![d])
}

/// Haar-random pure state.
pub fn random_pure<R: Rng>(d: usize, rng: &mut R) -> PureState {
    let g = ginibre(d, 1, rng);
    let v = CVector::from_iterator(d, g.iter().copied());
    PureState::normalized(v, vec![d]).expect("ginibre vector is nonzero")
}

/// Haar–Stinespring random channel with the given number of Kraus operators.
pub fn random_channel<R: Rng>(
    dim_in: usize,
    dim_out: usize,
    kraus_count: usize,
    rng: &mut R,
) -> QuantumChannel {
    assert!(
        dim_out * kraus_count >= dim_in,
        "environment too small for an isometry"
    );
    // isometry V: C^{dim_in} -> C^{dim_out * kraus_count} from QR
    let g = ginibre(dim_out * kraus_count, dim_in, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut v = qr.q();
    for j in 0..dim_in {
        let diag = r[(j, j)];
        if diag.norm() > 0.0 {
            let phase = diag / Complex64::new(diag.norm(), 0.0);
            for i in 0..v.nrows() {
                v[(i, j)] *= phase.conj();
            }
        }
    }
    let kraus: Vec<CMatrix> = (0..kraus_count)
        .map(|e| v.rows(e * dim_out, dim_out).into_owned())
        .collect();
    QuantumChannel::new(kraus).expect("isometry blocks form a valid channel")
}
