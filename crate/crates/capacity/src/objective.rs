//! The entanglement-assisted objective I(A':B) and its gradient in the
//! channel input.

use crate::{CapacityError, Result};
use ftcap_core::linalg::{hermitian_map, CMatrix};
use ftcap_core::{DensityMatrix, QuantumChannel};

/// Floor applied to eigenvalues inside matrix logarithms; keeps gradients
/// finite at the boundary of the state simplex.
const LOG_FLOOR: f64 = 1e-18;

fn log2_floored(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |x| x.max(LOG_FLOOR).log2())
}

fn check_dims(rho: &DensityMatrix, t: &QuantumChannel) -> Result<()> {
    if rho.dim() != t.dim_in() {
        return Err(CapacityError::Core(
            ftcap_core::CoreError::DimensionMismatch(format!(
                "input state dim {} vs channel input {}",
                rho.dim(),
                t.dim_in()
            )),
        ));
    }
    Ok(())
}

/// I(A':B) of (T x id)(purification of rho_A), in bits.
///
/// Evaluated as H(rho) + H(T(rho)) - H(T^c(rho)); the entropy of the joint
/// output equals the entropy of the complementary channel's output because
/// the dilated state is pure.
pub fn ea_objective(rho: &DensityMatrix, t: &QuantumChannel) -> Result<f64> {
    check_dims(rho, t)?;
    let h_in = rho.von_neumann_entropy();
    let out = t.apply_matrix(rho.entries());
    let h_out = ftcap_core::linalg::spectrum_entropy_bits(&out);
    let env = t.complementary_matrix(rho.entries());
    let h_env = ftcap_core::linalg::spectrum_entropy_bits(&env);
    Ok(h_in + h_out - h_env)
}

/// Same quantity computed through the explicit purification; slower, used
/// as an independent route in tests.
pub fn ea_objective_via_purification(rho: &DensityMatrix, t: &QuantumChannel) -> Result<f64> {
    check_dims(rho, t)?;
    let phi = DensityMatrix::from_pure(&rho.purification());
    let joint = t.apply(&phi, 0)?;
    Ok(joint.mutual_information(&[1])?)
}

/// Euclidean gradient of [`ea_objective`] with respect to the Hermitian
/// input, projected onto the trace-zero tangent of the state simplex.
pub fn ea_objective_gradient(rho: &DensityMatrix, t: &QuantumChannel) -> Result<CMatrix> {
    check_dims(rho, t)?;
    let d = rho.dim() as f64;
    let out = t.apply_matrix(rho.entries());
    let env = t.complementary_matrix(rho.entries());
    let mut g = -log2_floored(rho.entries());
    g -= t.apply_adjoint_matrix(&log2_floored(&out));
    g += t.complementary_adjoint_matrix(&log2_floored(&env));
    // project onto trace-zero directions
    let shift = g.trace() / num_complex::Complex64::new(d, 0.0);
    for i in 0..rho.dim() {
        g[(i, i)] -= shift;
    }
    // re-Hermitize round-off
    Ok((&g + g.adjoint()).scale(0.5))
}
