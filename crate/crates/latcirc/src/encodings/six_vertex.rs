//! Six-vertex gate set: the exchange-interaction gate family `U(t)` and the
//! singlet-preparation gate `V`, plus the four-qubit logical encoding they
//! act on.

use super::recipe::{EncodingKind, LogicalEncoding};
use crate::linalg::{cis, cr, CMat, C_ONE, C_ZERO};
use crate::spinlat::VertexTensor;
use num_complex::Complex64;

/// `U(t)`: the six-vertex-form gate with
/// `w_{00,00}=w_{11,11}=e^{2it}`, `w_{01,01}=w_{10,10}=cos 2t`,
/// `w_{01,10}=w_{10,01}=i sin 2t`. Equal to `exp(it(XX+YY+ZZ))` up to a
/// global phase.
pub fn u_gate(t: f64) -> CMat {
    let mut m = ndarray::Array2::from_elem((4, 4), C_ZERO);
    m[(0, 0)] = cis(2.0 * t);
    m[(3, 3)] = cis(2.0 * t);
    m[(1, 1)] = cr((2.0 * t).cos());
    m[(2, 2)] = cr((2.0 * t).cos());
    m[(1, 2)] = Complex64::new(0.0, (2.0 * t).sin());
    m[(2, 1)] = Complex64::new(0.0, (2.0 * t).sin());
    m
}

/// `V`: six-vertex-form with `w_{00,00}=w_{11,11}=1`,
/// `w_{01,01}=w_{10,10}=w_{01,10}=1/√2`, `w_{10,01}=−1/√2`;
/// sends `|01⟩` to the singlet `(|01⟩−|10⟩)/√2`.
pub fn v_gate() -> CMat {
    let s = cr(1.0 / 2f64.sqrt());
    let mut m = ndarray::Array2::from_elem((4, 4), C_ZERO);
    m[(0, 0)] = C_ONE;
    m[(3, 3)] = C_ONE;
    m[(1, 1)] = s;
    m[(2, 2)] = s;
    m[(1, 2)] = s;
    m[(2, 1)] = -s;
    m
}

/// Both gates of the construction.
pub fn six_vertex_gates(t: f64) -> (CMat, CMat) {
    (u_gate(t), v_gate())
}

pub fn u_tensor(t: f64) -> VertexTensor {
    VertexTensor::from_gate_matrix(&u_gate(t), 2).expect("4x4")
}

pub fn v_tensor() -> VertexTensor {
    VertexTensor::from_gate_matrix(&v_gate(), 2).expect("4x4")
}

/// The four-qubit encoding: `|0⟩_L = ½(|01⟩−|10⟩)^{⊗2}` and the orthogonal
/// total-spin-zero partner completing the exchange-invariant logical
/// subspace (the encoded |1⟩_L is reached by the encoded circuit itself, not
/// prepared directly).
pub fn six_vertex_encoding() -> LogicalEncoding {
    let mut zero = vec![C_ZERO; 16];
    // (|01⟩−|10⟩)⊗(|01⟩−|10⟩) / 2 over bits (q0 q1 q2 q3).
    let half = cr(0.5);
    zero[0b0101] = half;
    zero[0b0110] = -half;
    zero[0b1001] = -half;
    zero[0b1010] = half;
    let mut one = vec![C_ZERO; 16];
    let a = cr(1.0 / 3f64.sqrt());
    let b = cr(-0.5 / 3f64.sqrt());
    one[0b0011] = a;
    one[0b1100] = a;
    one[0b0101] = b;
    one[0b0110] = b;
    one[0b1001] = b;
    one[0b1010] = b;
    LogicalEncoding {
        kind: EncodingKind::SixVertexHeisenberg,
        q: 2,
        physical_per_logical: 4,
        basis: [zero, one],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, is_unitary, matmul};
    use crate::qcirc::{apply_gate, Gate, StateVector};

    #[test]
    fn u_at_zero_is_identity() {
        assert!(crate::linalg::max_abs_diff(&u_gate(0.0), &crate::linalg::eye(4)) < 1e-15);
    }

    #[test]
    fn gates_are_unitary_and_six_vertex_form() {
        for t in [0.0, 0.3, std::f64::consts::PI / 8.0, 1.9] {
            assert!(is_unitary(&u_gate(t), 1e-12));
            assert!(u_tensor(t).is_six_vertex_form(1e-15));
        }
        assert!(is_unitary(&v_gate(), 1e-12));
        assert!(v_tensor().is_six_vertex_form(1e-15));
    }

    #[test]
    fn v_sends_01_to_singlet() {
        let st = StateVector::basis(2, 2, 0b01);
        let g = Gate::new(v_gate(), vec![0, 1], "V", 2, 2).unwrap();
        let out = apply_gate(&st, &g).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((out.amps[0b01] - cr(s)).norm() < 1e-15);
        assert!((out.amps[0b10] + cr(s)).norm() < 1e-15);
        assert!(out.amps[0b00].norm() < 1e-15 && out.amps[0b11].norm() < 1e-15);
    }

    #[test]
    fn v_tensor_squared_prepares_logical_zero() {
        // V⊗V |0101⟩ = |0⟩_L exactly.
        let st = StateVector::basis(4, 2, 0b0101);
        let g1 = Gate::new(v_gate(), vec![0, 1], "V", 2, 4).unwrap();
        let g2 = Gate::new(v_gate(), vec![2, 3], "V", 2, 4).unwrap();
        let out = apply_gate(&apply_gate(&st, &g1).unwrap(), &g2).unwrap();
        let enc = six_vertex_encoding();
        for i in 0..16 {
            assert!((out.amps[i] - enc.basis[0][i]).norm() < 1e-15);
        }
    }

    #[test]
    fn encoding_basis_is_orthonormal_and_exchange_invariant() {
        let enc = six_vertex_encoding();
        let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
            a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
        };
        assert!((dot(&enc.basis[0], &enc.basis[0]) - C_ONE).norm() < 1e-12);
        assert!((dot(&enc.basis[1], &enc.basis[1]) - C_ONE).norm() < 1e-12);
        assert!(dot(&enc.basis[0], &enc.basis[1]).norm() < 1e-12);
        // U(t) on any neighboring pair keeps the logical subspace invariant.
        for pair in [[0usize, 1], [1, 2], [2, 3]] {
            let g = Gate::new(u_gate(0.37), pair.to_vec(), "U", 2, 4).unwrap();
            for b in 0..2 {
                let st = StateVector { n: 4, q: 2, amps: enc.basis[b].clone() };
                let out = apply_gate(&st, &g).unwrap();
                let p0 = dot(&enc.basis[0], &out.amps);
                let p1 = dot(&enc.basis[1], &out.amps);
                let back: Vec<Complex64> = (0..16)
                    .map(|i| p0 * enc.basis[0][i] + p1 * enc.basis[1][i])
                    .collect();
                let leak: f64 = out
                    .amps
                    .iter()
                    .zip(&back)
                    .map(|(x, y)| (x - y).norm_sqr())
                    .sum();
                assert!(leak.sqrt() < 1e-12, "pair {pair:?} leaks {leak}");
            }
        }
    }

    #[test]
    fn u_gate_commutes_with_its_adjoint_family() {
        let a = u_gate(0.4);
        let b = dagger(&u_gate(0.4));
        let ab = matmul(&a, &b);
        assert!(crate::linalg::max_abs_diff(&ab, &crate::linalg::eye(4)) < 1e-12);
    }
}
