//! Pure states as normalized complex amplitude vectors.

use crate::linalg::{CMatrix, CVector};
use crate::{CoreError, Result};
use num_complex::Complex64;

/// Unit-norm state vector with tensor-factor bookkeeping.
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: CVector,
    factors: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: CVector, factors: Vec<usize>) -> Result<Self> {
        let dim: usize = factors.iter().product();
        if dim == 0 || dim != amplitudes.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "factor product {dim} vs amplitude length {}",
                amplitudes.len()
            )));
        }
        if dim > crate::MAX_DIM {
            return Err(CoreError::InvalidArgument(format!(
                "dimension {dim} exceeds cap {}",
                crate::MAX_DIM
            )));
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidState(format!(
                "pure state norm {norm} deviates from 1 by more than 1e-12"
            )));
        }
        Ok(Self {
            amplitudes,
            factors,
        })
    }

    /// Normalize and wrap an arbitrary nonzero vector.
    pub fn normalized(mut amplitudes: CVector, factors: Vec<usize>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(CoreError::InvalidState("zero vector".into()));
        }
        amplitudes.apply(|c| *c /= Complex64::new(norm, 0.0));
        Self::new(amplitudes, factors)
    }

    /// Computational basis state |i> of dimension d.
    pub fn basis(d: usize, i: usize) -> Self {
        Self {
            amplitudes: crate::linalg::basis_vector(d, i),
            factors: vec![d],
        }
    }

    /// Two-qubit maximally entangled state (|00> + |11>)/sqrt(2).
    pub fn phi_plus() -> Self {
        Self::max_entangled(2)
    }

    /// Maximally entangled state sum_i |ii> / sqrt(d) on factors [d, d].
    pub fn max_entangled(d: usize) -> Self {
        let mut v = CVector::zeros(d * d);
        let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        for i in 0..d {
            v[i * d + i] = a;
        }
        Self {
            amplitudes: v,
            factors: vec![d, d],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Rank-one projector |psi><psi|.
    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let n = self.dim() * other.dim();
        let mut v = CVector::zeros(n);
        for i in 0..self.dim() {
            for j in 0..other.dim() {
                v[i * other.dim() + j] = self.amplitudes[i] * other.amplitudes[j];
            }
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        PureState {
            amplitudes: v,
            factors,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        let v = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(PureState::new(v, vec![2]).is_err());
    }

    #[test]
    fn phi_plus_is_unit_norm() {
        let s = PureState::phi_plus();
        let n: f64 = s.amplitudes().iter().map(|c| c.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-15);
        assert_eq!(s.factors(), &[2, 2]);
    }
}
