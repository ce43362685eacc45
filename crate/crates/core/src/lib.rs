//! Exact dense representations of finite-dimensional quantum objects:
//! density matrices with tensor-factor structure, channels in Kraus form,
//! pure states, and the entropic/distance functionals built on them.
//!
//! All entropic quantities are reported in bits (log base 2). Values are
//! immutable after construction and safe to share across threads; every
//! operation is a pure function.

pub mod channel;
pub mod density;
pub mod linalg;
pub mod pure;
pub mod random;

pub use channel::QuantumChannel;
pub use density::DensityMatrix;
pub use pure::PureState;

use thiserror::Error;

/// Hermiticity / trace / positivity tolerance for state validation.
pub const STATE_TOL: f64 = 1e-10;
/// Kraus completeness tolerance for channel construction.
pub const CHANNEL_TOL: f64 = 1e-10;
/// Completeness tolerance accepted by the JSON channel loader.
pub const CHANNEL_JSON_TOL: f64 = 1e-8;
/// Eigenvalues below this cutoff are treated as numerical zeros in entropies.
pub const EIGENVALUE_CUTOFF: f64 = 1e-12;
/// Hard cap on Hilbert-space dimension for dense computations.
pub const MAX_DIM: usize = 1 << 12;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("channel json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

/// Binary entropy h(x) = -x log2 x - (1-x) log2 (1-x), with h(0)=h(1)=0.
///
/// Lives here because every crate in the workspace needs it.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(CoreError::InvalidArgument(format!(
            "binary entropy argument {x} outside [0,1]"
        )));
    }
    let mut h = 0.0;
    if x > 0.0 {
        h -= x * x.log2();
    }
    if x < 1.0 {
        h -= (1.0 - x) * (1.0 - x).log2();
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_entropy_endpoints_and_midpoint() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn binary_entropy_pinned() {
        // direct evaluation oracle: -x log2 x - (1-x) log2 (1-x) at x = 0.05
        let x: f64 = 0.05;
        let oracle = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        let h = binary_entropy(0.05).unwrap();
        assert!((h - oracle).abs() < 1e-15);
        assert!((h - 0.28640).abs() < 1e-5);
    }
}
