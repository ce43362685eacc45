//! Quantum channels in Kraus form, builtin families, and the JSON wire format.

use crate::density::DensityMatrix;
use crate::linalg::{self, embed_at, kron, matrix_unit, max_abs_entry, CMatrix};
use crate::{CoreError, Result, CHANNEL_JSON_TOL, CHANNEL_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        Self::with_tolerance(kraus, CHANNEL_TOL)
    }

    pub fn with_tolerance(kraus: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| CoreError::InvalidChannel("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.nrows(), first.ncols());
        if dim_in == 0 || dim_out == 0 {
            return Err(CoreError::InvalidChannel("zero-dimensional Kraus".into()));
        }
        if dim_in > crate::MAX_DIM || dim_out > crate::MAX_DIM {
            return Err(CoreError::InvalidChannel(format!(
                "dimension exceeds cap {}",
                crate::MAX_DIM
            )));
        }
        if kraus
            .iter()
            .any(|k| k.nrows() != dim_out || k.ncols() != dim_in)
        {
            return Err(CoreError::InvalidChannel(
                "Kraus operators have inconsistent shapes".into(),
            ));
        }
        let mut sum = CMatrix::zeros(dim_in, dim_in);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let dev = max_abs_entry(&(&sum - linalg::identity(dim_in)));
        if dev > tol {
            return Err(CoreError::InvalidChannel(format!(
                "completeness violated: max |sum K'K - I| = {dev:.3e} > {tol:.1e}"
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    // ---- builtin families ----

    pub fn identity(d: usize) -> Self {
        Self {
            dim_in: d,
            dim_out: d,
            kraus: vec![linalg::identity(d)],
        }
    }

    /// Qubit depolarizing channel T(rho) = (1-l) rho + l I/2.
    pub fn depolarizing(lambda: f64) -> Self {
        assert!((0.0..=1.0).contains(&lambda), "lambda in [0,1]");
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let sx = CMatrix::from_row_slice(2, 2, &[Complex64::ZERO, one, one, Complex64::ZERO]);
        let sy = CMatrix::from_row_slice(2, 2, &[Complex64::ZERO, -i, i, Complex64::ZERO]);
        let sz = CMatrix::from_row_slice(2, 2, &[one, Complex64::ZERO, Complex64::ZERO, -one]);
        let a = (1.0 - 0.75 * lambda).sqrt();
        let b = (lambda / 4.0).sqrt();
        Self {
            dim_in: 2,
            dim_out: 2,
            kraus: vec![
                linalg::identity(2).scale(a),
                sx.scale(b),
                sy.scale(b),
                sz.scale(b),
            ],
        }
    }

    pub fn fully_depolarizing() -> Self {
        Self::depolarizing(1.0)
    }

    /// Qubit phase-flip channel T(rho) = (1-l) rho + l Z rho Z.
    pub fn dephasing(lambda: f64) -> Self {
        assert!((0.0..=1.0).contains(&lambda), "lambda in [0,1]");
        let one = Complex64::new(1.0, 0.0);
        let sz = CMatrix::from_row_slice(2, 2, &[one, Complex64::ZERO, Complex64::ZERO, -one]);
        Self {
            dim_in: 2,
            dim_out: 2,
            kraus: vec![
                linalg::identity(2).scale((1.0 - lambda).sqrt()),
                sz.scale(lambda.sqrt()),
            ],
        }
    }

    /// Erasure channel embedded into two qubits: the first output qubit is an
    /// erasure flag, the second carries the input (or |0> when erased).
    pub fn erasure(lambda: f64) -> Self {
        assert!((0.0..=1.0).contains(&lambda), "lambda in [0,1]");
        let mut keep = CMatrix::zeros(4, 2);
        keep[(0, 0)] = Complex64::new((1.0 - lambda).sqrt(), 0.0);
        keep[(1, 1)] = Complex64::new((1.0 - lambda).sqrt(), 0.0);
        let mut lose0 = CMatrix::zeros(4, 2);
        lose0[(2, 0)] = Complex64::new(lambda.sqrt(), 0.0);
        let mut lose1 = CMatrix::zeros(4, 2);
        lose1[(2, 1)] = Complex64::new(lambda.sqrt(), 0.0);
        Self {
            dim_in: 2,
            dim_out: 4,
            kraus: vec![keep, lose0, lose1],
        }
    }

    /// The map rho -> Tr(rho) I/d_out (useful for effective channels).
    pub fn trace_and_replace(dim_in: usize, dim_out: usize) -> Self {
        let scale = 1.0 / (dim_out as f64).sqrt();
        let mut kraus = Vec::with_capacity(dim_in * dim_out);
        for i in 0..dim_out {
            for j in 0..dim_in {
                let mut k = CMatrix::zeros(dim_out, dim_in);
                k[(i, j)] = Complex64::new(scale, 0.0);
                kraus.push(k);
            }
        }
        Self {
            dim_in,
            dim_out,
            kraus,
        }
    }

    // ---- algebra ----

    /// Convex combination wa * a + wb * b as a channel, by Kraus rescaling.
    pub fn convex(
        a: &QuantumChannel,
        wa: f64,
        b: &QuantumChannel,
        wb: f64,
    ) -> Result<QuantumChannel> {
        if a.dim_in != b.dim_in || a.dim_out != b.dim_out {
            return Err(CoreError::DimensionMismatch(format!(
                "convex combination of {}x{} and {}x{} channels",
                a.dim_out, a.dim_in, b.dim_out, b.dim_in
            )));
        }
        if wa < 0.0 || wb < 0.0 || (wa + wb - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidArgument(format!(
                "weights ({wa}, {wb}) are not a convex pair"
            )));
        }
        let mut kraus = Vec::with_capacity(a.kraus.len() + b.kraus.len());
        if wa > 0.0 {
            kraus.extend(a.kraus.iter().map(|k| k.scale(wa.sqrt())));
        }
        if wb > 0.0 {
            kraus.extend(b.kraus.iter().map(|k| k.scale(wb.sqrt())));
        }
        QuantumChannel::new(kraus)
    }

    /// Trace-out channel on dimension d (classical discard; output dim 1).
    pub fn trace_out(d: usize) -> Self {
        let kraus = (0..d)
            .map(|i| {
                let mut k = CMatrix::zeros(1, d);
                k[(0, i)] = Complex64::new(1.0, 0.0);
                k
            })
            .collect();
        Self {
            dim_in: d,
            dim_out: 1,
            kraus,
        }
    }

    /// Kronecker product channel; Kraus sets are pairwise products.
    pub fn tensor(&self, other: &QuantumChannel) -> QuantumChannel {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(kron(a, b));
            }
        }
        QuantumChannel {
            dim_in: self.dim_in * other.dim_in,
            dim_out: self.dim_out * other.dim_out,
            kraus,
        }
    }

    /// Composition self after inner: (self o inner)(rho) = self(inner(rho)).
    pub fn compose(&self, inner: &QuantumChannel) -> Result<QuantumChannel> {
        if inner.dim_out != self.dim_in {
            return Err(CoreError::DimensionMismatch(format!(
                "compose: inner out {} vs outer in {}",
                inner.dim_out, self.dim_in
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for a in &self.kraus {
            for b in &inner.kraus {
                kraus.push(a * b);
            }
        }
        Ok(QuantumChannel {
            dim_in: inner.dim_in,
            dim_out: self.dim_out,
            kraus,
        })
    }

    /// Raw Kraus action on an arbitrary matrix of matching dimension.
    pub fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        debug_assert_eq!(m.nrows(), self.dim_in);
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += k * m * k.adjoint();
        }
        out
    }

    /// Heisenberg-picture action sum_k K' m K on an output-space observable.
    pub fn apply_adjoint_matrix(&self, m: &CMatrix) -> CMatrix {
        debug_assert_eq!(m.nrows(), self.dim_out);
        let mut out = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            out += k.adjoint() * m * k;
        }
        out
    }

    /// Environment output of the Stinespring dilation: the m x m matrix with
    /// entries [k,l] = Tr(K_k rho K_l').
    pub fn complementary_matrix(&self, rho: &CMatrix) -> CMatrix {
        let m = self.kraus.len();
        let mut env = CMatrix::zeros(m, m);
        for k in 0..m {
            for l in 0..m {
                env[(k, l)] = (&self.kraus[k] * rho * self.kraus[l].adjoint()).trace();
            }
        }
        env
    }

    /// Adjoint of the complementary map applied to an environment observable.
    pub fn complementary_adjoint_matrix(&self, x: &CMatrix) -> CMatrix {
        let m = self.kraus.len();
        debug_assert_eq!(x.nrows(), m);
        let mut out = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in 0..m {
            for l in 0..m {
                out += (self.kraus[l].adjoint() * &self.kraus[k]).scale_complex(x[(l, k)]);
            }
        }
        out
    }

    /// Apply to the given tensor factor of a density matrix.
    pub fn apply(&self, rho: &DensityMatrix, on: usize) -> Result<DensityMatrix> {
        let factors = rho.factors();
        if on >= factors.len() {
            return Err(CoreError::InvalidArgument(format!(
                "factor index {on} out of range"
            )));
        }
        if factors[on] != self.dim_in {
            return Err(CoreError::DimensionMismatch(format!(
                "channel input {} vs factor dimension {}",
                self.dim_in, factors[on]
            )));
        }
        let mut out_dims = factors.to_vec();
        out_dims[on] = self.dim_out;
        let out_total: usize = out_dims.iter().product();
        let mut out = CMatrix::zeros(out_total, out_total);
        for k in &self.kraus {
            let lifted = embed_at(k, factors, on);
            out += &lifted * rho.entries() * lifted.adjoint();
        }
        Ok(DensityMatrix::new_unchecked(out, out_dims))
    }

    /// Choi matrix (T x id)(unnormalized maximally entangled state):
    /// sum_ij T(|i><j|) x |i><j|, trace = dim_in, PSD for CP maps.
    pub fn choi(&self) -> CMatrix {
        let d = self.dim_in;
        let total = self.dim_out * d;
        let mut choi = CMatrix::zeros(total, total);
        for i in 0..d {
            for j in 0..d {
                let out = self.apply_matrix(&matrix_unit(d, i, j));
                choi += kron(&out, &matrix_unit(d, i, j));
            }
        }
        choi
    }

    // ---- JSON wire format ----

    pub fn from_json_str(s: &str) -> Result<Self> {
        let wire: ChannelWire =
            serde_json::from_str(s).map_err(|e| CoreError::Json(e.to_string()))?;
        wire.into_channel()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ChannelWire::from_channel(self))
            .expect("channel serialization cannot fail")
    }
}

trait ScaleComplex {
    fn scale_complex(&self, c: Complex64) -> CMatrix;
}

impl ScaleComplex for CMatrix {
    fn scale_complex(&self, c: Complex64) -> CMatrix {
        self.map(|x| x * c)
    }
}

/// Serialized form: {"dim_in": n, "dim_out": m, "kraus": [[[[re,im],..],..],..]}.
#[derive(Serialize, Deserialize)]
struct ChannelWire {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelWire {
    fn from_channel(ch: &QuantumChannel) -> Self {
        let kraus = ch
            .kraus
            .iter()
            .map(|k| {
                (0..k.nrows())
                    .map(|r| {
                        (0..k.ncols())
                            .map(|c| [k[(r, c)].re, k[(r, c)].im])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            dim_in: ch.dim_in,
            dim_out: ch.dim_out,
            kraus,
        }
    }

    fn into_channel(self) -> Result<QuantumChannel> {
        if self.kraus.is_empty() {
            return Err(CoreError::Json("empty kraus list".into()));
        }
        let mut ops = Vec::with_capacity(self.kraus.len());
        for op in &self.kraus {
            if op.len() != self.dim_out || op.iter().any(|row| row.len() != self.dim_in) {
                return Err(CoreError::Json(format!(
                    "kraus operator shape mismatch: expected {}x{}",
                    self.dim_out, self.dim_in
                )));
            }
            let mut m = CMatrix::zeros(self.dim_out, self.dim_in);
            for (r, row) in op.iter().enumerate() {
                for (c, &[re, im]) in row.iter().enumerate() {
                    m[(r, c)] = Complex64::new(re, im);
                }
            }
            ops.push(m);
        }
        QuantumChannel::with_tolerance(ops, CHANNEL_JSON_TOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_channels_are_complete() {
        for ch in [
            QuantumChannel::identity(2),
            QuantumChannel::identity(3),
            QuantumChannel::depolarizing(0.1),
            QuantumChannel::fully_depolarizing(),
            QuantumChannel::dephasing(0.3),
            QuantumChannel::erasure(0.25),
            QuantumChannel::trace_and_replace(2, 2),
        ] {
            let mut sum = CMatrix::zeros(ch.dim_in(), ch.dim_in());
            for k in ch.kraus() {
                sum += k.adjoint() * k;
            }
            assert!(max_abs_entry(&(&sum - linalg::identity(ch.dim_in()))) < 1e-12);
        }
    }

    #[test]
    fn choi_examples() {
        // identity qubit channel -> 2 phi+
        let choi = QuantumChannel::identity(2).choi();
        let expected = DensityMatrix::phi_plus().entries().scale(2.0);
        assert!(max_abs_entry(&(&choi - &expected)) < 1e-12);

        // fully depolarizing qubit -> I/2 x I, trace 2 (direct Kraus-sum oracle)
        let choi = QuantumChannel::fully_depolarizing().choi();
        let expected = kron(&linalg::identity(2).scale(0.5), &linalg::identity(2));
        assert!(max_abs_entry(&(&choi - &expected)) < 1e-12);
        assert!((choi.trace().re - 2.0).abs() < 1e-12);

        // completeness <-> partial trace of Choi over output factor = identity
        let ch = QuantumChannel::depolarizing(0.37);
        let choi = DensityMatrix::new_unchecked(ch.choi().scale(0.5), vec![2, 2]);
        let reduced = choi.partial_trace(&[1]).unwrap();
        assert!(max_abs_entry(&(reduced.entries() - linalg::identity(2).scale(0.5))) < 1e-12);
    }

    #[test]
    fn choi_psd_for_random_channels() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let ch = crate::random::random_channel(2, 3, 4, &mut rng);
            let min = linalg::hermitian_eigenvalues(&ch.choi())[0];
            assert!(min > -1e-10);
        }
    }

    #[test]
    fn json_roundtrip_and_rejection() {
        let ch = QuantumChannel::depolarizing(0.1);
        let s = ch.to_json_string();
        let back = QuantumChannel::from_json_str(&s).unwrap();
        assert_eq!(back.dim_in(), 2);
        assert_eq!(back.dim_out(), 2);
        for (a, b) in ch.kraus().iter().zip(back.kraus()) {
            assert!(max_abs_entry(&(a - b)) < 1e-15);
        }

        // non-CPTP must be rejected by the loader
        let bad =
            r#"{"dim_in":2,"dim_out":2,"kraus":[[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.5,0.0]]]]}"#;
        assert!(QuantumChannel::from_json_str(bad).is_err());

        let malformed = r#"{"dim_in":2}"#;
        assert!(QuantumChannel::from_json_str(malformed).is_err());
    }

    #[test]
    fn erasure_flags_loss() {
        let ch = QuantumChannel::erasure(0.25);
        let rho = DensityMatrix::maximally_mixed(2);
        let out = ch.apply(&rho, 0).unwrap().with_factors(vec![2, 2]).unwrap();
        let flag = out.partial_trace(&[0]).unwrap();
        // flag qubit: diag(1-l, l)
        assert!((flag.entries()[(0, 0)].re - 0.75).abs() < 1e-12);
        assert!((flag.entries()[(1, 1)].re - 0.25).abs() < 1e-12);
    }
}
