//! LGT logical gates on the four-qubit repetition encoding
//! `|0⟩_L = |0000⟩`, `|1⟩_L = |1111⟩`: exact z-rotations and the two-qubit
//! `diag(1,i,i,1)` from single auxiliary plaquettes, the teleportation-based
//! Hadamard block, and the ζ-approximate physical identity.
//!
//! Every step is a face gate: a plaquette with some boundary spins fixed by
//! the gauge. Fixing values with odd parity turns the face weight `(v, 1)`
//! into `diag(1, v)` on one free spin, `diag(1,v,v,1)` on two, and an
//! equality projector when `v = 0`. The teleportation block consumes its
//! source and Bell registers by summing them out, which is exactly what the
//! partition function does to spins with no further interactions.

use super::recipe::{EncodingKind, GateRecipe, LogicalEncoding, RecipeStep, StepParams};
use super::EncodingsError;
use crate::linalg::{cis, cr, diag, eye, mat, CMat, C_I, C_ONE, C_ZERO};
use num_complex::Complex64;

pub fn lgt_encoding() -> LogicalEncoding {
    let mut zero = vec![C_ZERO; 16];
    zero[0b0000] = C_ONE;
    let mut one = vec![C_ZERO; 16];
    one[0b1111] = C_ONE;
    LogicalEncoding { kind: EncodingKind::LgtFourQubit, q: 2, physical_per_logical: 4, basis: [zero, one] }
}

/// Diagonal face gate on `k` free spins: entry = `even` or `odd` by the
/// parity of the spins plus `fixed_parity`.
fn face_diag(k: usize, even: Complex64, odd: Complex64, fixed_parity: u8) -> CMat {
    let dim = 1usize << k;
    let entries: Vec<Complex64> = (0..dim)
        .map(|idx| {
            if (idx.count_ones() as u8 + fixed_parity) & 1 == 0 {
                even
            } else {
                odd
            }
        })
        .collect();
    diag(&entries)
}

/// Temporal face gate `[[w(p), w(1+p)],[w(1+p), w(p)]]`.
fn face_temporal(even: Complex64, odd: Complex64, fixed_parity: u8) -> CMat {
    let w = |par: u8| if par & 1 == 0 { even } else { odd };
    mat(&[
        &[w(fixed_parity), w(1 ^ fixed_parity)],
        &[w(1 ^ fixed_parity), w(fixed_parity)],
    ])
}

struct LgtBuilder {
    steps: Vec<RecipeStep>,
    next_aux: usize,
}

impl LgtBuilder {
    fn new() -> Self {
        LgtBuilder { steps: Vec::new(), next_aux: 0 }
    }

    /// Spatial face with `4 - targets.len()` gauge-fixed spins whose values
    /// have parity `fixed_parity`.
    fn spatial(&mut self, targets: &[usize], value: Complex64, fixed_parity: u8, label: &str) {
        let fixed = 4 - targets.len();
        let aux = self.fresh_aux(fixed, fixed_parity);
        self.steps.push(RecipeStep {
            matrix: face_diag(targets.len(), value, C_ONE, fixed_parity),
            targets: targets.to_vec(),
            label: label.to_string(),
            params: StepParams::LgtFace { even: value, odd: C_ONE, fixed_parity, temporal: false },
            aux,
        });
    }

    /// Temporal face connecting consecutive time slices of one wire; the two
    /// gauge-fixed time edges carry parity `fixed_parity`.
    fn temporal(&mut self, target: usize, even: Complex64, odd: Complex64, fixed_parity: u8, label: &str) {
        let aux = self.fresh_aux(2, fixed_parity);
        self.steps.push(RecipeStep {
            matrix: face_temporal(even, odd, fixed_parity),
            targets: vec![target],
            label: label.to_string(),
            params: StepParams::LgtFace { even, odd, fixed_parity, temporal: true },
            aux,
        });
    }

    fn fresh_aux(&mut self, count: usize, parity: u8) -> Vec<(usize, u8)> {
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let v = if i == 0 { parity & 1 } else { 0 };
            out.push((self.next_aux, v));
            self.next_aux += 1;
        }
        out
    }
}

pub fn rz_matrix(xi: f64) -> CMat {
    diag(&[C_ONE, cis(xi)])
}

/// Logical `R_z(ξ) = diag(1, e^{iξ})`: one auxiliary plaquette sharing a
/// single physical qubit, `e^{βJ} = e^{iξ}`, odd gauge parity.
pub fn lgt_rz(xi: f64) -> Result<GateRecipe, EncodingsError> {
    if !(0.0..2.0 * std::f64::consts::PI + 1e-12).contains(&xi) {
        return Err(EncodingsError::BadParameter(format!("xi = {xi} outside [0, 2pi)")));
    }
    let mut b = LgtBuilder::new();
    b.spatial(&[0], cis(xi), 1, "Rz aux plaquette e^{i xi}");
    Ok(GateRecipe {
        name: "lgt_rz".to_string(),
        encoding: lgt_encoding(),
        logical_width: 1,
        physical_width: 4,
        input_wires: vec![0, 1, 2, 3],
        output_wires: vec![0, 1, 2, 3],
        contracted_wires: vec![],
        initial_basis: vec![],
        steps: b.steps,
        ideal: rz_matrix(xi),
        normalization: C_ONE,
        epsilon: None,
        error_budget: None,
        error_power: 1,
        trailing_rz: None,
    })
}

/// The non-local part of the logical CZ: `diag(1,i,i,1)` from an auxiliary
/// plaquette with `e^{βJ} = i` shared between the two logical qubits.
pub fn lgt_diag_1ii1() -> GateRecipe {
    let mut b = LgtBuilder::new();
    b.spatial(&[3, 4], C_I, 1, "CZ-part aux plaquette e^{beta J}=i");
    GateRecipe {
        name: "lgt_diag_1ii1".to_string(),
        encoding: lgt_encoding(),
        logical_width: 2,
        physical_width: 8,
        input_wires: (0..8).collect(),
        output_wires: (0..8).collect(),
        contracted_wires: vec![],
        initial_basis: vec![],
        steps: b.steps,
        ideal: diag(&[C_ONE, C_I, C_I, C_ONE]),
        normalization: C_ONE,
        epsilon: None,
        error_budget: None,
        error_power: 1,
        trailing_rz: None,
    }
}

/// Measured coefficient for the physical-identity error `c·ζ` (worst case
/// `2ζ` over normalized inputs), frozen with 2× headroom.
pub const LGT_I1_ERROR_COEFF: f64 = 4.0;

/// Physical single-qubit identity `I1(ζ)`: the energy-shifted temporal face
/// `(1, ζ)` on each physical qubit of the logical block.
pub fn lgt_i1_physical(zeta: f64) -> Result<GateRecipe, EncodingsError> {
    if !(zeta > 0.0 && zeta <= 0.1) {
        return Err(EncodingsError::BadParameter(format!("zeta = {zeta} outside (0, 0.1]")));
    }
    let mut b = LgtBuilder::new();
    for w in 0..4 {
        b.temporal(w, C_ONE, cr(zeta), 0, "I1 shifted face (1,zeta)");
    }
    Ok(GateRecipe {
        name: "lgt_i1".to_string(),
        encoding: lgt_encoding(),
        logical_width: 1,
        physical_width: 4,
        input_wires: vec![0, 1, 2, 3],
        output_wires: vec![0, 1, 2, 3],
        contracted_wires: vec![],
        initial_basis: vec![],
        steps: b.steps,
        ideal: eye(2),
        normalization: C_ONE,
        epsilon: Some(zeta),
        error_budget: Some(LGT_I1_ERROR_COEFF),
        error_power: 1,
        trailing_rz: None,
    })
}

/// Wire layout of the teleportation block: the source logical qubit, two
/// fresh logical qubits, and the two routing spins (the "middle" qubit
/// carrying the Bell block into the output block, and the Bell-projection
/// carrier between source and Bell block).
pub const TELEPORT_SOURCE: [usize; 4] = [0, 1, 2, 3];
pub const TELEPORT_BELL: [usize; 4] = [4, 5, 6, 7];
pub const TELEPORT_OUT: [usize; 4] = [8, 9, 10, 11];
pub const TELEPORT_MIDDLE: usize = 12;
pub const TELEPORT_BELL_CARRIER: usize = 13;

/// Teleportation-based Hadamard block: applies
/// `R_z(π/2) · H̃ · R_z(α)` with `H̃ = √2·H` to the logical qubit, the
/// result landing on a fresh logical block two positions over.
///
/// Steps: spread the two fresh logical blocks and the middle qubit out of
/// their gauge-fixed `|0⟩` past (`e^{βJ}=1` faces), imprint the input
/// rotation as `e^{βJ}=e^{i(α+π)}` on one source qubit, project the fresh
/// blocks into the encoded subspace and onto `|0⟩_L + |1⟩_L` (`e^{βJ}=0`
/// equality faces), phase the Bell block with `e^{βJ}=i`, copy through the
/// middle qubit, attach the output block with another `e^{βJ}=i` face, and
/// close with the two-face Bell projection between source and Bell blocks.
/// The source, Bell and middle spins are then summed out.
pub fn lgt_teleport_h(alpha: f64) -> GateRecipe {
    let mut b = LgtBuilder::new();
    // 1. births: e^{βJ}=1 on every fresh physical qubit
    for &w in TELEPORT_BELL.iter().chain(TELEPORT_OUT.iter()) {
        b.temporal(w, C_ONE, C_ONE, 0, "spread e^{beta J}=1");
    }
    b.temporal(TELEPORT_MIDDLE, C_ONE, C_ONE, 0, "spread middle");
    b.temporal(TELEPORT_BELL_CARRIER, C_ONE, C_ONE, 0, "spread bell carrier");
    // 2. input rotation on one source qubit
    b.spatial(&[TELEPORT_SOURCE[3]], cis(alpha + std::f64::consts::PI), 1, "rotation e^{i(alpha+pi)}");
    // 3. encode constraints: pairwise equality within each fresh block
    for block in [TELEPORT_BELL, TELEPORT_OUT] {
        b.spatial(&[block[0], block[1]], C_ZERO, 1, "equality (0,odd)");
        b.spatial(&[block[2], block[3]], C_ZERO, 1, "equality (0,odd)");
        b.spatial(&[block[1], block[2]], C_ZERO, 1, "equality (0,odd)");
    }
    // 4. e^{βJ}=i on the Bell block, copy to the middle qubit, e^{βJ}=i into
    //    the output block
    b.spatial(&[TELEPORT_BELL[0]], C_I, 1, "phase e^{beta J}=i on bell block");
    b.spatial(&[TELEPORT_BELL[3], TELEPORT_MIDDLE], C_ZERO, 1, "copy bell->middle");
    b.spatial(&[TELEPORT_MIDDLE, TELEPORT_OUT[0]], C_I, 1, "e^{beta J}=i middle-output");
    // 5. Bell projection between source and Bell blocks: two concatenated
    //    e^{βJ}=0 faces through the carrier spin
    b.spatial(&[TELEPORT_SOURCE[0], TELEPORT_BELL_CARRIER], C_ZERO, 1, "bell projection 1/2");
    b.spatial(&[TELEPORT_BELL_CARRIER, TELEPORT_BELL[0]], C_ZERO, 1, "bell projection 2/2");

    let ideal = rz_matrix(std::f64::consts::FRAC_PI_2)
        .dot(&hadamard_2x2())
        .dot(&rz_matrix(alpha));
    GateRecipe {
        name: "lgt_teleport_h".to_string(),
        encoding: lgt_encoding(),
        logical_width: 1,
        physical_width: 14,
        input_wires: TELEPORT_SOURCE.to_vec(),
        output_wires: TELEPORT_OUT.to_vec(),
        contracted_wires: TELEPORT_SOURCE
            .iter()
            .chain(TELEPORT_BELL.iter())
            .copied()
            .chain([TELEPORT_MIDDLE, TELEPORT_BELL_CARRIER])
            .collect(),
        initial_basis: TELEPORT_BELL
            .iter()
            .chain(TELEPORT_OUT.iter())
            .map(|&w| (w, 0u8))
            .chain([(TELEPORT_MIDDLE, 0u8), (TELEPORT_BELL_CARRIER, 0u8)])
            .collect(),
        steps: b.steps,
        ideal,
        normalization: cr(2f64.sqrt()),
        epsilon: None,
        error_budget: None,
        error_power: 1,
        trailing_rz: Some(std::f64::consts::FRAC_PI_2),
    }
}

fn hadamard_2x2() -> CMat {
    let s = cr(1.0 / 2f64.sqrt());
    mat(&[&[s, s], &[s, -s]])
}

/// The gate-set bundle: `{R_z(ξ), diag(1,i,i,1), teleport_H̃(α), I1(ζ)}`.
pub fn lgt_logical_gates(xi: f64, zeta: f64, alpha: f64) -> Result<Vec<GateRecipe>, EncodingsError> {
    Ok(vec![lgt_rz(xi)?, lgt_diag_1ii1(), lgt_teleport_h(alpha), lgt_i1_physical(zeta)?])
}

/// Face phases that chain teleported Hadamards into the Euler product
/// `R_z(γ)HR_z(β)HR_z(α)`: the first block carries `α+π`, the second
/// `β+π/2` and the closing rotation `γ−π/2`, compensating each block's
/// trailing `R_z(π/2)`.
pub fn euler_chain_face_phases(alpha: f64, beta: f64, gamma: f64) -> (f64, f64, f64) {
    (
        alpha + std::f64::consts::PI,
        beta + std::f64::consts::FRAC_PI_2,
        gamma - std::f64::consts::FRAC_PI_2,
    )
}

/// Whether a face weight pair is in the gauge-theory construction's value set
/// `{0, e^{iξ}, 1/2, ζ}` (plain couplings `(v,1)`) or the shifted identity
/// `(1,ζ)`.
pub fn is_allowed_face(even: Complex64, odd: Complex64, zeta: f64, tol: f64) -> bool {
    if (odd - C_ONE).norm() <= tol {
        let v = even;
        return v.norm() <= tol
            || (v.norm() - 1.0).abs() <= tol
            || (v - cr(0.5)).norm() <= tol
            || (v - cr(zeta)).norm() <= tol;
    }
    (even - C_ONE).norm() <= tol && (odd - cr(zeta)).norm() <= tol
}
