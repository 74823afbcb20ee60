//! Qudit circuit representation and exact dense simulation.
//!
//! Circuits here are ordered lists of gates over `n` qudits of dimension `q`;
//! gates are arbitrary complex matrices (Boltzmann-weight gates are usually
//! *not* unitary), applied first to last. The three evaluation primitives are
//! [`apply_gate`], [`matrix_element`] (`⟨L|C|R⟩` with product-state boundary
//! vectors) and [`trace`] (`Σ_s ⟨s|C|s⟩`). Wire 0 is the most significant
//! base-`q` digit of an amplitude index.

use crate::linalg::{self, CMat, C_ONE, C_ZERO};
use crate::par;
use num_complex::Complex64;
use thiserror::Error;

pub use crate::linalg::distance_up_to_phase;

/// Widest gate supported: four qudits (the LGT spatial plaquette).
pub const MAX_GATE_ARITY: usize = 4;

/// Default cap on circuit width for [`trace`], in qudits.
pub const DEFAULT_TRACE_CAP: usize = 14;

#[derive(Debug, Error)]
pub enum QcircError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
    #[error("circuit is not unitary: {0}")]
    NonUnitaryCircuit(String),
}

pub type Result<T> = std::result::Result<T, QcircError>;

/// One gate: a `q^k × q^k` complex matrix applied to `k` ordered target wires.
#[derive(Debug, Clone)]
pub struct Gate {
    pub matrix: CMat,
    pub targets: Vec<usize>,
    pub label: String,
}

impl Gate {
    /// Validating constructor; `width` and `q` are the circuit's.
    pub fn new(matrix: CMat, targets: Vec<usize>, label: impl Into<String>, q: usize, width: usize) -> Result<Self> {
        let k = targets.len();
        if k == 0 || k > MAX_GATE_ARITY {
            return Err(QcircError::DimensionMismatch(format!(
                "gate arity {k} outside 1..={MAX_GATE_ARITY}"
            )));
        }
        let dim = q.pow(k as u32);
        if matrix.dim() != (dim, dim) {
            return Err(QcircError::DimensionMismatch(format!(
                "gate on {k} qudits of dimension {q} needs a {dim}x{dim} matrix, got {:?}",
                matrix.dim()
            )));
        }
        let mut seen = targets.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != k || targets.iter().any(|&t| t >= width) {
            return Err(QcircError::DimensionMismatch(format!(
                "targets {targets:?} must be distinct and < width {width}"
            )));
        }
        Ok(Gate { matrix, targets, label: label.into() })
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        linalg::is_unitary(&self.matrix, tol)
    }

    /// Conjugate-transposed gate on the same targets.
    pub fn adjoint(&self) -> Gate {
        Gate {
            matrix: linalg::dagger(&self.matrix),
            targets: self.targets.clone(),
            label: format!("{}^dag", self.label),
        }
    }
}

/// Ordered gate list over `width` qudits of dimension `q`, applied first to
/// last, with an accumulated scalar prefactor.
#[derive(Debug, Clone)]
pub struct Circuit {
    pub width: usize,
    pub q: usize,
    pub gates: Vec<Gate>,
    pub scalar_prefactor: Complex64,
}

impl Circuit {
    pub fn new(width: usize, q: usize) -> Self {
        Circuit { width, q, gates: Vec::new(), scalar_prefactor: C_ONE }
    }

    pub fn dim(&self) -> usize {
        self.q.pow(self.width as u32)
    }

    /// Append a gate built from `matrix` on `targets`.
    pub fn push(&mut self, matrix: CMat, targets: &[usize], label: impl Into<String>) -> Result<()> {
        let g = Gate::new(matrix, targets.to_vec(), label, self.q, self.width)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.gates.iter().all(|g| g.is_unitary(tol))
    }

    /// Dense matrix of the whole circuit (prefactor included); intended for
    /// small widths only.
    pub fn to_matrix(&self) -> CMat {
        let dim = self.dim();
        let mut m = ndarray::Array2::from_elem((dim, dim), C_ZERO);
        for col in 0..dim {
            let mut st = StateVector::basis(self.width, self.q, col as u64);
            for g in &self.gates {
                st = apply_gate(&st, g).expect("gate validated at construction");
            }
            for row in 0..dim {
                m[(row, col)] = st.amps[row] * self.scalar_prefactor;
            }
        }
        m
    }
}

/// Compose: run `c1`'s gates, then `c2`'s; prefactors multiply.
pub fn compose(c1: &Circuit, c2: &Circuit) -> Result<Circuit> {
    if c1.width != c2.width || c1.q != c2.q {
        return Err(QcircError::DimensionMismatch(format!(
            "compose: ({}, q={}) vs ({}, q={})",
            c1.width, c1.q, c2.width, c2.q
        )));
    }
    let mut gates = c1.gates.clone();
    gates.extend(c2.gates.iter().cloned());
    Ok(Circuit {
        width: c1.width,
        q: c1.q,
        gates,
        scalar_prefactor: c1.scalar_prefactor * c2.scalar_prefactor,
    })
}

/// Adjoint circuit: gates reversed and conjugate-transposed, prefactor
/// conjugated.
pub fn adjoint(c: &Circuit) -> Circuit {
    Circuit {
        width: c.width,
        q: c.q,
        gates: c.gates.iter().rev().map(Gate::adjoint).collect(),
        scalar_prefactor: c.scalar_prefactor.conj(),
    }
}

/// Dense complex amplitude vector over `q^n` basis states. The norm is finite
/// but not required to be 1; Boltzmann gates shrink and grow it freely.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n: usize,
    pub q: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(n: usize, q: usize, index: u64) -> Self {
        let dim = q.pow(n as u32);
        let mut amps = vec![C_ZERO; dim];
        amps[index as usize] = C_ONE;
        StateVector { n, q, amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Product state given as one amplitude vector of length `q` per qudit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    pub q: usize,
    pub factors: Vec<Vec<Complex64>>,
}

impl ProductState {
    pub fn basis(q: usize, digits: &[u8]) -> Self {
        let factors = digits
            .iter()
            .map(|&d| {
                let mut f = vec![C_ZERO; q];
                f[d as usize] = C_ONE;
                f
            })
            .collect();
        ProductState { q, factors }
    }

    /// `|+⟩^{⊗n}`: the normalized uniform superposition on every qudit.
    pub fn plus(q: usize, n: usize) -> Self {
        let amp = linalg::cr(1.0 / (q as f64).sqrt());
        ProductState { q, factors: vec![vec![amp; q]; n] }
    }

    pub fn width(&self) -> usize {
        self.factors.len()
    }

    /// Amplitude of basis state `index`.
    pub fn amplitude(&self, index: u64) -> Complex64 {
        let mut idx = index;
        let n = self.width();
        let mut acc = C_ONE;
        // Wire 0 is the most significant digit.
        for w in (0..n).rev() {
            let d = (idx % self.q as u64) as usize;
            idx /= self.q as u64;
            acc *= self.factors[w][d];
        }
        acc
    }

    pub fn dense(&self) -> StateVector {
        let n = self.width();
        let dim = self.q.pow(n as u32);
        let amps = (0..dim as u64).map(|i| self.amplitude(i)).collect();
        StateVector { n, q: self.q, amps }
    }
}

/// Contract `gate` into `state` on the gate's target wires; all other
/// amplitudes pass through untouched.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let q = state.q;
    let n = state.n;
    let k = gate.targets.len();
    let gdim = q.pow(k as u32);
    if gate.matrix.dim() != (gdim, gdim) || gate.targets.iter().any(|&t| t >= n) {
        return Err(QcircError::DimensionMismatch(format!(
            "gate {} does not fit a width-{n} q={q} register",
            gate.label
        )));
    }
    // Stride of wire w in the amplitude index.
    let stride = |w: usize| q.pow((n - 1 - w) as u32) as u64;
    let strides: Vec<u64> = gate.targets.iter().map(|&t| stride(t)).collect();
    // offs[j] = index offset of gate-local basis state j on the target wires.
    let offs: Vec<u64> = (0..gdim as u64)
        .map(|j| {
            let mut rem = j;
            let mut off = 0u64;
            for s in strides.iter().rev() {
                off += (rem % q as u64) * s;
                rem /= q as u64;
            }
            off
        })
        .collect();
    let dim = state.amps.len();
    let amps = par::map_indexed(dim, |idx| {
        let idx = idx as u64;
        // Decode the target digits of idx into a gate-local row index.
        let mut row = 0u64;
        for stride in &strides {
            let d = (idx / stride) % q as u64;
            row = row * q as u64 + d;
        }
        let base = idx - offs[row as usize];
        let mut acc = C_ZERO;
        for col in 0..gdim as u64 {
            let m = gate.matrix[(row as usize, col as usize)];
            if m != C_ZERO {
                acc += m * state.amps[(base + offs[col as usize]) as usize];
            }
        }
        acc
    });
    Ok(StateVector { n, q, amps })
}

/// Run the circuit on `right` and overlap with `left`:
/// `scalar_prefactor · ⟨left|gates…|right⟩`.
pub fn matrix_element(circuit: &Circuit, left: &ProductState, right: &ProductState) -> Result<Complex64> {
    if left.width() != circuit.width || right.width() != circuit.width || left.q != circuit.q || right.q != circuit.q {
        return Err(QcircError::DimensionMismatch(format!(
            "boundary states ({}, {}) do not match circuit width {} q {}",
            left.width(),
            right.width(),
            circuit.width,
            circuit.q
        )));
    }
    let mut st = right.dense();
    for g in &circuit.gates {
        st = apply_gate(&st, g)?;
    }
    let mut acc = C_ZERO;
    for (idx, amp) in st.amps.iter().enumerate() {
        if *amp != C_ZERO {
            acc += left.amplitude(idx as u64).conj() * amp;
        }
    }
    Ok(acc * circuit.scalar_prefactor)
}

/// `Σ_s ⟨s|C|s⟩`, prefactor included.
pub fn trace(circuit: &Circuit) -> Result<Complex64> {
    trace_with_cap(circuit, DEFAULT_TRACE_CAP)
}

/// [`trace`] with an explicit width cap.
pub fn trace_with_cap(circuit: &Circuit, cap: usize) -> Result<Complex64> {
    if circuit.width > cap {
        return Err(QcircError::EnumerationTooLarge(format!(
            "trace over width {} exceeds cap {cap}",
            circuit.width
        )));
    }
    let dim = circuit.dim() as u64;
    let gates = &circuit.gates;
    let total = par::complex_sum_indexed(dim, |s| {
        let mut st = StateVector::basis(circuit.width, circuit.q, s);
        for g in gates {
            st = apply_gate(&st, g).expect("gate validated at construction");
        }
        st.amps[s as usize]
    });
    Ok(total * circuit.scalar_prefactor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cis, cr, diag, eye, mat, C_I};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_state(n: usize, q: usize, rng: &mut impl Rng) -> StateVector {
        let dim = q.pow(n as u32);
        let amps = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        StateVector { n, q, amps }
    }

    fn random_matrix(dim: usize, rng: &mut impl Rng) -> CMat {
        let mut m = ndarray::Array2::from_elem((dim, dim), C_ZERO);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    /// Independent oracle: the full q^n-dimensional matrix of a gate, built
    /// entrywise from the definition (targets embedded, rest identity).
    fn naive_full_matrix(gate: &Gate, n: usize, q: usize) -> CMat {
        let dim = q.pow(n as u32);
        let digits = |mut x: u64| -> Vec<u64> {
            let mut d = vec![0u64; n];
            for w in (0..n).rev() {
                d[w] = x % q as u64;
                x /= q as u64;
            }
            d
        };
        let mut full = ndarray::Array2::from_elem((dim, dim), C_ZERO);
        for r in 0..dim as u64 {
            let rd = digits(r);
            for c in 0..dim as u64 {
                let cd = digits(c);
                let mut rest_equal = true;
                for w in 0..n {
                    if !gate.targets.contains(&w) && rd[w] != cd[w] {
                        rest_equal = false;
                        break;
                    }
                }
                if !rest_equal {
                    continue;
                }
                let mut row = 0u64;
                let mut col = 0u64;
                for &t in &gate.targets {
                    row = row * q as u64 + rd[t];
                    col = col * q as u64 + cd[t];
                }
                full[(r as usize, c as usize)] = gate.matrix[(row as usize, col as usize)];
            }
        }
        full
    }

    #[test]
    fn identity_gate_keeps_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let st = random_state(3, 2, &mut rng);
        let g = Gate::new(eye(2), vec![1], "I", 2, 3).unwrap();
        let out = apply_gate(&st, &g).unwrap();
        assert_eq!(st, out);
    }

    #[test]
    fn ising_vertical_gate_phases_00() {
        // diag(i,1,1,i) on |00>: picks up the equal-spin Boltzmann weight i.
        let wv = diag(&[C_I, C_ONE, C_ONE, C_I]);
        let g = Gate::new(wv, vec![0, 1], "W_e^v", 2, 2).unwrap();
        let st = StateVector::basis(2, 2, 0);
        let out = apply_gate(&st, &g).unwrap();
        assert!((out.amps[0] - C_I).norm() < 1e-15);
        assert!(out.amps[1..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn gate_application_matches_naive_full_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2usize, 3] {
            for targets in [vec![0usize, 2], vec![2, 0], vec![1, 2]] {
                let g = Gate::new(random_matrix(q * q, &mut rng), targets, "G", q, 3).unwrap();
                let st = random_state(3, q, &mut rng);
                let fast = apply_gate(&st, &g).unwrap();
                let full = naive_full_matrix(&g, 3, q);
                for r in 0..st.amps.len() {
                    let mut acc = C_ZERO;
                    for c in 0..st.amps.len() {
                        acc += full[(r, c)] * st.amps[c];
                    }
                    assert!((acc - fast.amps[r]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn apply_gate_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = Gate::new(random_matrix(4, &mut rng), vec![0, 2], "G", 2, 3).unwrap();
        let x = random_state(3, 2, &mut rng);
        let y = random_state(3, 2, &mut rng);
        let (a, b) = (Complex64::new(0.3, -0.8), Complex64::new(-1.1, 0.25));
        let mixed = StateVector {
            n: 3,
            q: 2,
            amps: x
                .amps
                .iter()
                .zip(y.amps.iter())
                .map(|(xa, ya)| a * xa + b * ya)
                .collect(),
        };
        let lhs = apply_gate(&mixed, &g).unwrap();
        let gx = apply_gate(&x, &g).unwrap();
        let gy = apply_gate(&y, &g).unwrap();
        for i in 0..lhs.amps.len() {
            assert!((lhs.amps[i] - (a * gx.amps[i] + b * gy.amps[i])).norm() < 1e-12);
        }
    }

    #[test]
    fn empty_circuit_matrix_element_is_one() {
        let c = Circuit::new(3, 2);
        let l = ProductState::basis(2, &[0, 0, 0]);
        let r = ProductState::basis(2, &[0, 0, 0]);
        assert!((matrix_element(&c, &l, &r).unwrap() - C_ONE).norm() < 1e-15);
    }

    #[test]
    fn hadamard_entry() {
        let s = cr(1.0 / 2f64.sqrt());
        let h = mat(&[&[s, s], &[s, -s]]);
        let mut c = Circuit::new(1, 2);
        c.push(h, &[0], "H").unwrap();
        let l = ProductState::basis(2, &[1]);
        let r = ProductState::basis(2, &[0]);
        let v = matrix_element(&c, &l, &r).unwrap();
        assert!((v - s).norm() < 1e-15);
    }

    #[test]
    fn trace_of_identity_circuit() {
        for (n, q) in [(3usize, 2usize), (2, 3)] {
            let c = Circuit::new(n, q);
            let t = trace(&c).unwrap();
            assert!((t - cr(q.pow(n as u32) as f64)).norm() < 1e-12);
        }
    }

    #[test]
    fn trace_of_single_qubit_gate_is_diagonal_sum() {
        let m = mat(&[&[cr(0.3), cr(7.0)], &[C_I, Complex64::new(-0.25, 1.5)]]);
        let mut c = Circuit::new(1, 2);
        c.push(m.clone(), &[0], "M").unwrap();
        let t = trace(&c).unwrap();
        assert!((t - (m[(0, 0)] + m[(1, 1)])).norm() < 1e-14);
    }

    #[test]
    fn adjoint_twice_is_identity_gate_by_gate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut c = Circuit::new(3, 2);
        c.scalar_prefactor = Complex64::new(0.4, -1.7);
        c.push(random_matrix(4, &mut rng), &[0, 1], "A").unwrap();
        c.push(random_matrix(2, &mut rng), &[2], "B").unwrap();
        let cc = adjoint(&adjoint(&c));
        assert_eq!(c.gates.len(), cc.gates.len());
        assert!((c.scalar_prefactor - cc.scalar_prefactor).norm() < 1e-15);
        for (g, h) in c.gates.iter().zip(cc.gates.iter()) {
            assert_eq!(g.targets, h.targets);
            assert!(crate::linalg::max_abs_diff(&g.matrix, &h.matrix) < 1e-15);
        }
    }

    #[test]
    fn matrix_element_adjoint_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut c = Circuit::new(3, 2);
            c.scalar_prefactor = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for _ in 0..4 {
                let t0 = rng.gen_range(0..3);
                let mut t1 = rng.gen_range(0..3);
                while t1 == t0 {
                    t1 = rng.gen_range(0..3);
                }
                c.push(random_matrix(4, &mut rng), &[t0, t1], "G").unwrap();
            }
            let l = ProductState {
                q: 2,
                factors: (0..3)
                    .map(|_| vec![Complex64::new(rng.gen(), rng.gen()), Complex64::new(rng.gen(), rng.gen())])
                    .collect(),
            };
            let r = ProductState {
                q: 2,
                factors: (0..3)
                    .map(|_| vec![Complex64::new(rng.gen(), rng.gen()), Complex64::new(rng.gen(), rng.gen())])
                    .collect(),
            };
            let fwd = matrix_element(&c, &l, &r).unwrap();
            let bwd = matrix_element(&adjoint(&c), &r, &l).unwrap();
            assert!((fwd - bwd.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn trace_is_cyclic_under_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut a = Circuit::new(2, 2);
        let mut b = Circuit::new(2, 2);
        for _ in 0..3 {
            a.push(random_matrix(4, &mut rng), &[0, 1], "a").unwrap();
            b.push(random_matrix(2, &mut rng), &[rng.gen_range(0..2)], "b").unwrap();
        }
        let tab = trace(&compose(&a, &b).unwrap()).unwrap();
        let tba = trace(&compose(&b, &a).unwrap()).unwrap();
        assert!((tab - tba).norm() < 1e-10 * tab.norm().max(1.0));
    }

    #[test]
    fn unitary_circuit_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let s = cr(1.0 / 2f64.sqrt());
        let h = mat(&[&[s, s], &[s, -s]]);
        let p = diag(&[C_ONE, cis(0.3)]);
        let cz = diag(&[C_ONE, C_ONE, C_ONE, -C_ONE]);
        let mut c = Circuit::new(3, 2);
        c.push(h, &[1], "H").unwrap();
        c.push(p, &[0], "P").unwrap();
        c.push(cz, &[1, 2], "CZ").unwrap();
        assert!(c.is_unitary(1e-12));
        let st = random_state(3, 2, &mut rng);
        let mut out = st.clone();
        for g in &c.gates {
            out = apply_gate(&out, g).unwrap();
        }
        assert!((out.norm() - st.norm()).abs() < 1e-12);
    }

    #[test]
    fn trace_cap_is_enforced() {
        let c = Circuit::new(15, 2);
        assert!(matches!(trace(&c), Err(QcircError::EnumerationTooLarge(_))));
    }
}
