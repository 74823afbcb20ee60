//! Encoded universal gate constructions for the four model families:
//! concrete gate values, logical encodings, multi-step recipes, and their
//! verification against the ideal logical unitaries.

mod ising;
mod lgt;
mod potts;
mod recipe;
mod six_vertex;

pub use ising::{
    find_inverse_power, find_inverse_power_capped, hadamard, ising_gate_set, pauli_z, phase_gate,
    IsingGates,
};
pub use lgt::{
    euler_chain_face_phases, is_allowed_face, lgt_diag_1ii1, lgt_encoding, lgt_i1_physical,
    lgt_logical_gates, lgt_rz, lgt_teleport_h, rz_matrix, LGT_I1_ERROR_COEFF, TELEPORT_BELL,
    TELEPORT_MIDDLE, TELEPORT_OUT, TELEPORT_SOURCE,
};
pub use potts::{
    is_allowed_mu_nu, potts_allowed_mu_nu, potts_cz, potts_encoding, potts_h, potts_i1, potts_i2,
    potts_logical_gates, potts_p8, POTTS_H_ERROR_COEFF,
};
pub use recipe::{
    compose_ideals, fitted_error_slope, ideal_tensor, random_logical_state, recipe_bound,
    verify_recipe, EncodingKind, GateRecipe, LogicalEncoding, RecipeReport, RecipeStep, StepParams,
};
pub use six_vertex::{
    six_vertex_encoding, six_vertex_gates, u_gate, u_tensor, v_gate, v_tensor,
};

use crate::linalg::CMat;
use crate::qcirc::QcircError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EncodingsError {
    #[error("epsilon {0} outside (0, 0.1]")]
    BadEpsilon(f64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("inverse-power search exhausted: no m <= {cap} within distance {delta}")]
    SearchExhausted { cap: usize, delta: f64 },
    #[error("auxiliary reused: {0}")]
    AuxReused(String),
    #[error(transparent)]
    Qcirc(#[from] QcircError),
}

/// Extract Euler angles `(α, β, γ)` with
/// `U ∝ R_z(γ)·H·R_z(β)·H·R_z(α)`, where `R_z(θ) = diag(1, e^{iθ})`.
///
/// Using `H R_z(β) H ∝ R_x(β)` this is the ZXZ decomposition of the
/// SU(2) part of `U`; the global phase is discarded.
pub fn euler_zhzhz_angles(u: &CMat) -> Result<(f64, f64, f64), EncodingsError> {
    if u.dim() != (2, 2) || !crate::linalg::is_unitary(u, 1e-9) {
        return Err(EncodingsError::BadParameter("euler extraction needs a 2x2 unitary".into()));
    }
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let s = det.sqrt();
    let v00 = u[(0, 0)] / s;
    let v01 = u[(0, 1)] / s;
    let beta = 2.0 * v01.norm().atan2(v00.norm());
    // α + γ from the diagonal entry, α − γ from the off-diagonal
    // V01 = −i sin(β/2) e^{i(α−γ)/2}; degenerate entries leave the
    // corresponding combination free, pinned to zero.
    let sum = if v00.norm() > 1e-9 { -2.0 * v00.arg() } else { 0.0 };
    let diff = if v01.norm() > 1e-9 {
        2.0 * (v01.arg() + std::f64::consts::FRAC_PI_2)
    } else {
        0.0
    };
    Ok(((sum + diff) / 2.0, beta, (sum - diff) / 2.0))
}

/// Compose `R_z(γ)HR_z(β)HR_z(α)` as a dense matrix.
pub fn zhzhz(alpha: f64, beta: f64, gamma: f64) -> CMat {
    rz_matrix(gamma)
        .dot(&hadamard())
        .dot(&rz_matrix(beta))
        .dot(&hadamard())
        .dot(&rz_matrix(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cis, distance_up_to_phase, mat, C_ZERO};
    use num_complex::Complex64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_unitary_2x2(rng: &mut ChaCha8Rng) -> CMat {
        let theta = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let (p1, p2, g) = (
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let (c, s) = (theta.cos(), theta.sin());
        let m = mat(&[
            &[cis(p1) * c, cis(p2) * s],
            &[-cis(-p2) * s, cis(-p1) * c],
        ]);
        m.mapv(|z| z * cis(g))
    }

    #[test]
    fn euler_extraction_round_trips_100_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..100 {
            let u = random_unitary_2x2(&mut rng);
            let (a, b, g) = euler_zhzhz_angles(&u).unwrap();
            let rebuilt = zhzhz(a, b, g);
            assert!(distance_up_to_phase(&rebuilt, &u) < 1e-9);
        }
    }

    #[test]
    fn euler_extraction_handles_diagonal_and_antidiagonal() {
        for u in [
            rz_matrix(0.9),
            mat(&[&[C_ZERO, Complex64::new(0.6, 0.8)], &[Complex64::new(-0.6, 0.8), C_ZERO]]),
        ] {
            let (a, b, g) = euler_zhzhz_angles(&u).unwrap();
            assert!(distance_up_to_phase(&zhzhz(a, b, g), &u) < 1e-9);
        }
    }
}
