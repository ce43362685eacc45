//! Density matrices with subsystem structure, and the entropy/distance
//! functionals defined on them.

use crate::linalg::{
    self, hermitian_eigenvalues, psd_sqrt, ravel, spectrum_entropy_bits, unravel, CMatrix,
};
use crate::pure::PureState;
use crate::{CoreError, Result, EIGENVALUE_CUTOFF, STATE_TOL};
use num_complex::Complex64;

/// Positive semi-definite unit-trace complex matrix carrying an ordered
/// list of subsystem dimensions whose product equals the total dimension.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    entries: CMatrix,
    factors: Vec<usize>,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian within 1e-10, trace 1 within 1e-10,
    /// minimum eigenvalue >= -1e-10.
    pub fn new(entries: CMatrix, factors: Vec<usize>) -> Result<Self> {
        let dim: usize = factors.iter().product();
        if dim == 0 || entries.nrows() != dim || entries.ncols() != dim {
            return Err(CoreError::DimensionMismatch(format!(
                "entries {}x{} vs factor product {dim}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if dim > crate::MAX_DIM {
            return Err(CoreError::InvalidArgument(format!(
                "dimension {dim} exceeds cap {}",
                crate::MAX_DIM
            )));
        }
        if !linalg::is_hermitian(&entries, STATE_TOL) {
            return Err(CoreError::InvalidState("not Hermitian within 1e-10".into()));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(CoreError::InvalidState(format!(
                "trace {tr} deviates from 1 by more than 1e-10"
            )));
        }
        let min_eig = hermitian_eigenvalues(&entries)[0];
        if min_eig < -STATE_TOL {
            return Err(CoreError::InvalidState(format!(
                "minimum eigenvalue {min_eig} below -1e-10"
            )));
        }
        Ok(Self { entries, factors })
    }

    /// Construct without validation. For internal plumbing where the
    /// invariants hold by construction.
    pub fn new_unchecked(entries: CMatrix, factors: Vec<usize>) -> Self {
        Self { entries, factors }
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self {
            entries: state.projector(),
            factors: state.factors().to_vec(),
        }
    }

    /// I/d on a single factor of dimension d.
    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            entries: linalg::identity(d).scale(1.0 / d as f64),
            factors: vec![d],
        }
    }

    pub fn phi_plus() -> Self {
        Self::from_pure(&PureState::phi_plus())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Reinterpret the same matrix with a different factor split.
    pub fn with_factors(&self, factors: Vec<usize>) -> Result<Self> {
        let dim: usize = factors.iter().product();
        if dim != self.dim() {
            return Err(CoreError::DimensionMismatch(format!(
                "factor product {dim} vs dimension {}",
                self.dim()
            )));
        }
        Ok(Self {
            entries: self.entries.clone(),
            factors,
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.entries)[0]
    }

    /// Kronecker product; factor lists concatenate.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        DensityMatrix {
            entries: linalg::kron(&self.entries, &other.entries),
            factors,
        }
    }

    /// Reduced state on the kept factors (ascending index order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(CoreError::InvalidArgument("keep set is empty".into()));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.iter().any(|&i| i >= self.factors.len()) {
            return Err(CoreError::InvalidArgument(format!(
                "keep index out of range (have {} factors)",
                self.factors.len()
            )));
        }
        let traced: Vec<usize> = (0..self.factors.len())
            .filter(|i| !keep.contains(i))
            .collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&i| self.factors[i]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&i| self.factors[i]).collect();
        let kd: usize = keep_dims.iter().product();
        let td: usize = traced_dims.iter().product();

        let mut out = CMatrix::zeros(kd, kd);
        let full_dims = &self.factors;
        let nf = full_dims.len();
        for r in 0..kd {
            let rk = unravel(r, &keep_dims);
            for c in 0..kd {
                let ck = unravel(c, &keep_dims);
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..td {
                    let tm = unravel(t, &traced_dims);
                    let mut rm = vec![0usize; nf];
                    let mut cm = vec![0usize; nf];
                    for (pos, &f) in keep.iter().enumerate() {
                        rm[f] = rk[pos];
                        cm[f] = ck[pos];
                    }
                    for (pos, &f) in traced.iter().enumerate() {
                        rm[f] = tm[pos];
                        cm[f] = tm[pos];
                    }
                    acc += self.entries[(ravel(&rm, full_dims), ravel(&cm, full_dims))];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(DensityMatrix {
            entries: out,
            factors: keep_dims,
        })
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> f64 {
        spectrum_entropy_bits(&self.entries)
    }

    /// Quantum mutual information I(A:B) = H(A) + H(B) - H(AB) in bits,
    /// where side A is the given subset of factor indices.
    pub fn mutual_information(&self, side_a: &[usize]) -> Result<f64> {
        if self.factors.len() < 2 {
            return Err(CoreError::InvalidArgument(
                "mutual information needs at least two factors".into(),
            ));
        }
        let mut a = side_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.is_empty()
            || a.iter().any(|&i| i >= self.factors.len())
            || a.len() == self.factors.len()
        {
            return Err(CoreError::InvalidArgument(
                "side A must be a nonempty proper subset of factors".into(),
            ));
        }
        let b: Vec<usize> = (0..self.factors.len()).filter(|i| !a.contains(i)).collect();
        let rho_a = self.partial_trace(&a)?;
        let rho_b = self.partial_trace(&b)?;
        Ok(rho_a.von_neumann_entropy() + rho_b.von_neumann_entropy() - self.von_neumann_entropy())
    }

    /// Squared-trace fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
    pub fn fidelity(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch(format!(
                "fidelity between dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let s = psd_sqrt(&self.entries);
        let inner = &s * &other.entries * &s;
        let root: f64 = hermitian_eigenvalues(&inner)
            .into_iter()
            .map(|l| l.max(0.0).sqrt())
            .sum();
        Ok((root * root).clamp(0.0, 1.0 + 1e-9).min(1.0))
    }

    /// Trace distance: half the sum of absolute eigenvalues of rho - sigma.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch(format!(
                "trace distance between dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let diff = &self.entries - &other.entries;
        Ok(0.5
            * hermitian_eigenvalues(&diff)
                .iter()
                .map(|l| l.abs())
                .sum::<f64>())
    }

    /// Canonical purification |phi> = sum_i sqrt(l_i) |v_i>|i> on factors [d, d].
    pub fn purification(&self) -> PureState {
        let (vals, vecs) = linalg::hermitian_eigen(&self.entries);
        let d = self.dim();
        let mut amps = crate::linalg::CVector::zeros(d * d);
        for (i, &l) in vals.iter().enumerate() {
            if l <= 0.0 {
                continue;
            }
            let s = l.sqrt();
            for r in 0..d {
                amps[r * d + i] += vecs[(r, i)] * Complex64::new(s, 0.0);
            }
        }
        PureState::normalized(amps, vec![d, d]).expect("purification of a unit-trace state")
    }

    /// Eigenvalues ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    /// Largest eigenvalue convenience accessor.
    pub fn max_eigenvalue(&self) -> f64 {
        *self
            .eigenvalues()
            .last()
            .expect("density matrix has at least one eigenvalue")
    }

    /// Smallest eigenvalue above the workspace cutoff.
    pub fn min_positive_eigenvalue(&self) -> Option<f64> {
        self.eigenvalues()
            .into_iter()
            .find(|&l| l > EIGENVALUE_CUTOFF)
    }
}
