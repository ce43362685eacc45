//! Dense complex linear algebra helpers shared by the quantum types.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    max_abs_entry(&(m - m.adjoint())) <= tol
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns,
/// ordered to match the eigenvalues.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    // Symmetrize first so accumulated round-off cannot feed the solver a
    // slightly non-Hermitian input.
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        vectors.set_column(new_col, &eig.eigenvectors.column(old_col));
    }
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let n = values.len();
    let mut diag = CMatrix::zeros(n, n);
    for i in 0..n {
        diag[(i, i)] = Complex64::new(f(values[i]), 0.0);
    }
    &vectors * diag * vectors.adjoint()
}

/// Positive-semidefinite square root (negative round-off eigenvalues clamped).
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |x| x.max(0.0).sqrt())
}

/// Shannon entropy in bits of a Hermitian matrix's spectrum, with the
/// workspace eigenvalue cutoff applied.
pub fn spectrum_entropy_bits(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .filter(|&l| l > crate::EIGENVALUE_CUTOFF)
        .map(|l| -l * l.log2())
        .sum()
}

/// Decompose a flat index into a mixed-radix multi-index over `dims`
/// (most significant factor first, matching Kronecker-product ordering).
pub fn unravel(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = index % dims[i];
        index /= dims[i];
    }
    out
}

/// Inverse of [`unravel`].
pub fn ravel(multi: &[usize], dims: &[usize]) -> usize {
    let mut index = 0usize;
    for (m, d) in multi.iter().zip(dims.iter()) {
        index = index * d + m;
    }
    index
}

/// Permute the tensor factors of an operator.
///
/// `perm[j]` is the old factor that ends up at new position `j`, so the
/// output acts on `H_{perm[0]} ⊗ H_{perm[1]} ⊗ …`.
pub fn permute_factors(m: &CMatrix, dims: &[usize], perm: &[usize]) -> CMatrix {
    let total: usize = dims.iter().product();
    assert_eq!(m.nrows(), total);
    assert_eq!(m.ncols(), total);
    assert_eq!(perm.len(), dims.len());
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    // map old flat index -> new flat index
    let mut index_map = vec![0usize; total];
    for (old, slot) in index_map.iter_mut().enumerate() {
        let multi = unravel(old, dims);
        let new_multi: Vec<usize> = perm.iter().map(|&p| multi[p]).collect();
        *slot = ravel(&new_multi, &new_dims);
    }
    let mut out = CMatrix::zeros(total, total);
    for r in 0..total {
        for c in 0..total {
            out[(index_map[r], index_map[c])] = m[(r, c)];
        }
    }
    out
}

/// Lift an operator acting on factor `which` of the space described by
/// `dims` to the full space: `I ⊗ … ⊗ op ⊗ … ⊗ I`.
///
/// `op` may be rectangular (rows acting as the new factor dimension).
pub fn embed_at(op: &CMatrix, dims: &[usize], which: usize) -> CMatrix {
    let pre: usize = dims[..which].iter().product();
    let post: usize = dims[which + 1..].iter().product();
    kron(&kron(&identity(pre), op), &identity(post))
}

/// Column of a `d`-dimensional computational basis state.
pub fn basis_vector(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = cone();
    v
}

/// Matrix unit |i><j| on dimension `d`.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, j)] = cone();
    m
}
