//! The Ising gate set `{W_h, W̄_h, W_v, V}` and its derived gates
//! `K = W̄_h V`, `T = V^{1/2} W̄_h V^{1/2}`, with the composite identities
//! that make the set universal on two qubits.

use super::EncodingsError;
use crate::linalg::{
    cis, cr, dagger, diag, distance_up_to_phase, frobenius_norm, is_unitary, mat, mat_trace,
    matprod, CMat, C_I, C_ONE,
};

/// The concrete gate matrices of the construction.
#[derive(Debug, Clone)]
pub struct IsingGates {
    /// `[[i,1],[1,i]]` — the horizontal-edge gate at `e^{βJ}=i`.
    pub w_h: CMat,
    /// `W_h/√2`, unitary.
    pub w_h_bar: CMat,
    /// `diag(i,1,1,i)` — the vertical-edge gate.
    pub w_v: CMat,
    /// `diag(e^{iπ/4},1)` — the field gate at `e^{βh}=e^{iπ/4}`.
    pub v: CMat,
    /// `diag(e^{iπ/8},1)`.
    pub v_half: CMat,
    /// `K = W̄_h · V`.
    pub k: CMat,
    /// `T = V^{1/2} · W̄_h · V^{1/2}`.
    pub t: CMat,
}

pub fn ising_gate_set() -> IsingGates {
    let w_h = mat(&[&[C_I, C_ONE], &[C_ONE, C_I]]);
    let s = cr(1.0 / 2f64.sqrt());
    let w_h_bar = w_h.mapv(|z| z * s);
    let w_v = diag(&[C_I, C_ONE, C_ONE, C_I]);
    let v = diag(&[cis(std::f64::consts::FRAC_PI_4), C_ONE]);
    let v_half = diag(&[cis(std::f64::consts::PI / 8.0), C_ONE]);
    let k = w_h_bar.dot(&v);
    let t = v_half.dot(&w_h_bar).dot(&v_half);
    IsingGates { w_h, w_h_bar, w_v, v, v_half, k, t }
}

pub fn pauli_z() -> CMat {
    diag(&[C_ONE, -C_ONE])
}

pub fn phase_gate() -> CMat {
    diag(&[C_ONE, C_I])
}

pub fn hadamard() -> CMat {
    let s = cr(1.0 / 2f64.sqrt());
    mat(&[&[s, s], &[s, -s]])
}

impl IsingGates {
    /// `Z K Z K Z (K†)² Z`, proportional to the Hadamard gate.
    pub fn hadamard_composite(&self) -> CMat {
        let z = pauli_z();
        let kd = dagger(&self.k);
        matprod(&[&z, &self.k, &z, &self.k, &z, &kd, &kd, &z])
    }

    /// `K Z K† Z K† Z K`, proportional to the phase gate `P = diag(1,i)`.
    pub fn phase_composite(&self) -> CMat {
        let z = pauli_z();
        let kd = dagger(&self.k);
        matprod(&[&self.k, &z, &kd, &z, &kd, &z, &self.k])
    }

    /// `W_v²`, proportional to `Z⊗Z`.
    pub fn w_v_squared(&self) -> CMat {
        self.w_v.dot(&self.w_v)
    }

    /// The composite two-qubit generator `T^{⊗2} W_v T^{⊗2}` on a pair.
    pub fn tt_wv_tt(&self) -> CMat {
        let tt = crate::linalg::kron(&self.t, &self.t);
        tt.dot(&self.w_v).dot(&tt)
    }
}

/// Smallest `m` (within `cap`) with `distance_up_to_phase(gate^m, gate†) <
/// delta`. A cheap Frobenius lower bound screens most powers before the
/// operator-norm distance is evaluated.
pub fn find_inverse_power_capped(gate: &CMat, delta: f64, cap: usize) -> Result<usize, EncodingsError> {
    if !is_unitary(gate, 1e-10) {
        return Err(EncodingsError::BadParameter("find_inverse_power needs a unitary gate".into()));
    }
    if delta <= 0.0 {
        return Err(EncodingsError::BadParameter("delta must be positive".into()));
    }
    let target = dagger(gate);
    let dim = gate.dim().0 as f64;
    let target_norm2 = frobenius_norm(&target).powi(2);
    let mut power = gate.clone();
    for m in 1..=cap {
        // min_φ ‖A − e^{iφ}B‖_F² = ‖A‖² + ‖B‖² − 2|tr(B†A)|, and the operator
        // norm is at least the Frobenius norm over √dim. The slack keeps
        // roundoff in the bound from masking genuine hits.
        let overlap = mat_trace(&dagger(&target).dot(&power)).norm();
        let fro2 = (frobenius_norm(&power).powi(2) + target_norm2 - 2.0 * overlap).max(0.0);
        let lower_bound = (fro2 / dim).sqrt();
        if lower_bound < 4.0 * delta + 1e-7 && distance_up_to_phase(&power, &target) < delta {
            return Ok(m);
        }
        power = power.dot(gate);
    }
    Err(EncodingsError::SearchExhausted { cap, delta })
}

/// [`find_inverse_power_capped`] with the default cap of 10^6.
pub fn find_inverse_power(gate: &CMat, delta: f64) -> Result<usize, EncodingsError> {
    find_inverse_power_capped(gate, delta, 1_000_000)
}
