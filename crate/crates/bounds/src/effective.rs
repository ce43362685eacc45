//! Effective communication channel with syndrome side input.

use crate::{BoundsError, Result};
use ftcap_core::QuantumChannel;

/// Kraus form of (1-p)(T x Tr_S) + p N, acting on data and syndrome factors
/// of dimensions (dim_in(T), syndrome_dim).
pub fn effective_channel(
    t: &QuantumChannel,
    p: f64,
    n: &QuantumChannel,
    syndrome_dim: usize,
) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(BoundsError::InvalidArgument(format!(
            "effective_channel: p = {p} outside [0,1]"
        )));
    }
    if syndrome_dim == 0 {
        return Err(BoundsError::InvalidArgument(
            "effective_channel: zero syndrome dimension".into(),
        ));
    }
    if n.dim_in() != t.dim_in() * syndrome_dim || n.dim_out() != t.dim_out() {
        return Err(BoundsError::Core(ftcap_core::CoreError::DimensionMismatch(
            format!(
                "perturbation must map {}x{} -> {}, got {} -> {}",
                t.dim_in(),
                syndrome_dim,
                t.dim_out(),
                n.dim_in(),
                n.dim_out()
            ),
        )));
    }
    let ideal = t.tensor(&QuantumChannel::trace_out(syndrome_dim));
    Ok(QuantumChannel::convex(&ideal, 1.0 - p, n, p)?)
}
