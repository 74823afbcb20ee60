//! Classical simulation of the quantum estimation procedures: the Hadamard
//! test for matrix elements and the one-clean-qubit normalized-trace
//! estimator.
//!
//! Shots are drawn from the *exactly computed* outcome probabilities
//! (`p0 = [1+Re c]/2` and, with the extra phase gate, `p̃0 = [1−Im c]/2`)
//! rather than by simulating the ancilla-extended circuit per shot — the
//! distribution is identical and the cost is one exact evaluation. The
//! ancilla-extended construction is built once in the test suite as a
//! cross-check.
//!
//! Randomness comes from the counter-based ChaCha8 generator
//! (`rand_chacha` 0.3). Shots are partitioned into fixed 4096-shot chunks;
//! chunk `j` draws from stream `j` of the master seed, so results are
//! bit-identical for any worker count.

use crate::par;
use crate::qcirc::{self, Circuit, ProductState, QcircError};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error("circuit is not unitary: {0}")]
    NonUnitaryCircuit(String),
    #[error("bad estimator config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Qcirc(#[from] QcircError),
}

pub type Result<T> = std::result::Result<T, EstimateError>;

const CHUNK_SHOTS: u64 = 4096;

/// Sampling configuration. With `shots: None` the count is auto-sized to
/// `ceil(2·ln(4/δ)/ε²)` per quadrature (Hoeffding for the real and imaginary
/// parts separately).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub shots: Option<u64>,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
}

impl EstimatorConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        EstimatorConfig { shots: None, epsilon, delta, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(EstimateError::BadConfig(format!("epsilon {} outside (0,1]", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(EstimateError::BadConfig(format!("delta {} outside (0,1)", self.delta)));
        }
        if self.shots == Some(0) {
            return Err(EstimateError::BadConfig("shots must be positive".into()));
        }
        Ok(())
    }

    /// Shots per quadrature.
    pub fn shots_per_part(&self) -> u64 {
        match self.shots {
            Some(s) => s,
            None => (2.0 * (4.0 / self.delta).ln() / (self.epsilon * self.epsilon)).ceil() as u64,
        }
    }
}

/// Sampling result. `value = (2·p0_re − 1) + i·(1 − 2·p0_im)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub epsilon: f64,
    pub shots_used: u64,
    pub p0_re: f64,
    pub p0_im: f64,
}

/// Draw `shots` Bernoulli(p) outcomes and count the zeros, chunked over
/// fixed seed streams. `stream_base` separates independent quadratures.
fn count_zeros(p: f64, shots: u64, seed: u64, stream_base: u64) -> u64 {
    let p = p.clamp(0.0, 1.0);
    let chunks = shots.div_ceil(CHUNK_SHOTS);
    let counts = par::map_indexed(chunks as usize, |j| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_base + j as u64);
        let start = j as u64 * CHUNK_SHOTS;
        let end = (start + CHUNK_SHOTS).min(shots);
        let mut count = 0u64;
        for _ in start..end {
            if rng.gen::<f64>() < p {
                count += 1;
            }
        }
        count
    });
    counts.into_iter().sum()
}

/// Per-shot mixture sampling for the trace estimator: draw a basis state
/// uniformly, then a Bernoulli outcome with that state's probability.
fn count_zeros_mixture(probs: &[f64], shots: u64, seed: u64, stream_base: u64) -> u64 {
    let chunks = shots.div_ceil(CHUNK_SHOTS);
    let counts = par::map_indexed(chunks as usize, |j| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_base + j as u64);
        let start = j as u64 * CHUNK_SHOTS;
        let end = (start + CHUNK_SHOTS).min(shots);
        let mut count = 0u64;
        for _ in start..end {
            let s = rng.gen_range(0..probs.len());
            if rng.gen::<f64>() < probs[s] {
                count += 1;
            }
        }
        count
    });
    counts.into_iter().sum()
}

fn ensure_unitary(circuit: &Circuit) -> Result<()> {
    for g in &circuit.gates {
        if !g.is_unitary(1e-10) {
            return Err(EstimateError::NonUnitaryCircuit(format!("gate '{}'", g.label)));
        }
    }
    Ok(())
}

fn estimate_from_c(c: Complex64, cfg: &EstimatorConfig) -> Estimate {
    let shots = cfg.shots_per_part();
    let p0_re_exact = (1.0 + c.re) / 2.0;
    let p0_im_exact = (1.0 - c.im) / 2.0;
    let zeros_re = count_zeros(p0_re_exact, shots, cfg.seed, 0);
    let zeros_im = count_zeros(p0_im_exact, shots, cfg.seed, 1 << 32);
    let p0_re = zeros_re as f64 / shots as f64;
    let p0_im = zeros_im as f64 / shots as f64;
    Estimate {
        value: Complex64::new(2.0 * p0_re - 1.0, 1.0 - 2.0 * p0_im),
        epsilon: cfg.epsilon,
        shots_used: 2 * shots,
        p0_re,
        p0_im,
    }
}

/// Hadamard-test estimate of `c = ⟨left|C|right⟩` for a unitary circuit and
/// normalized product boundary states.
pub fn hadamard_test(
    circuit: &Circuit,
    left: &ProductState,
    right: &ProductState,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    ensure_unitary(circuit)?;
    for ps in [left, right] {
        for f in &ps.factors {
            let norm: f64 = f.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(EstimateError::BadConfig(
                    "boundary product states must be normalized".into(),
                ));
            }
        }
    }
    let c = qcirc::matrix_element(circuit, left, right)?;
    Ok(estimate_from_c(c, cfg))
}

/// One-clean-qubit estimate of the normalized trace `2^{−n}·Tr C`: each shot
/// draws a uniformly random basis state `s` and Hadamard-tests `⟨s|C|s⟩`
/// with that state's exact outcome probability.
pub fn dqc1_trace_estimate(circuit: &Circuit, cfg: &EstimatorConfig) -> Result<Estimate> {
    cfg.validate()?;
    ensure_unitary(circuit)?;
    if circuit.width > qcirc::DEFAULT_TRACE_CAP {
        return Err(EstimateError::BadConfig(format!(
            "width {} exceeds the trace cap {}",
            circuit.width,
            qcirc::DEFAULT_TRACE_CAP
        )));
    }
    let diag = circuit_diagonal(circuit)?;
    let shots = cfg.shots_per_part();
    let probs_re: Vec<f64> = diag.iter().map(|c| ((1.0 + c.re) / 2.0).clamp(0.0, 1.0)).collect();
    let probs_im: Vec<f64> = diag.iter().map(|c| ((1.0 - c.im) / 2.0).clamp(0.0, 1.0)).collect();
    let zeros_re = count_zeros_mixture(&probs_re, shots, cfg.seed, 0);
    let zeros_im = count_zeros_mixture(&probs_im, shots, cfg.seed, 1 << 32);
    let p0_re = zeros_re as f64 / shots as f64;
    let p0_im = zeros_im as f64 / shots as f64;
    Ok(Estimate {
        value: Complex64::new(2.0 * p0_re - 1.0, 1.0 - 2.0 * p0_im),
        epsilon: cfg.epsilon,
        shots_used: 2 * shots,
        p0_re,
        p0_im,
    })
}

/// All diagonal elements `⟨s|C|s⟩`.
pub fn circuit_diagonal(circuit: &Circuit) -> Result<Vec<Complex64>> {
    let dim = circuit.dim();
    let gates = &circuit.gates;
    let out = par::map_indexed(dim, |s| {
        let mut st = qcirc::StateVector::basis(circuit.width, circuit.q, s as u64);
        for g in gates {
            st = qcirc::apply_gate(&st, g).expect("gate validated at construction");
        }
        st.amps[s] * circuit.scalar_prefactor
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cis, cr, diag, mat, C_ONE, C_ZERO};

    fn hadamard_circuit(n: usize) -> Circuit {
        let s = cr(1.0 / 2f64.sqrt());
        let h = mat(&[&[s, s], &[s, -s]]);
        let mut c = Circuit::new(n, 2);
        for w in 0..n {
            c.push(h.clone(), &[w], "H").unwrap();
        }
        c
    }

    #[test]
    fn identity_circuit_estimates_one() {
        let c = Circuit::new(3, 2);
        let cfg = EstimatorConfig { shots: Some(10_000), epsilon: 0.05, delta: 0.01, seed: 7 };
        let l = ProductState::basis(2, &[0, 0, 0]);
        let r = ProductState::basis(2, &[0, 0, 0]);
        let e = hadamard_test(&c, &l, &r, &cfg).unwrap();
        assert!((e.value - C_ONE).norm() < 0.05);
    }

    #[test]
    fn orthogonal_states_estimate_zero() {
        let c = Circuit::new(2, 2);
        let cfg = EstimatorConfig::new(0.05, 0.01, 3);
        let l = ProductState::basis(2, &[0, 1]);
        let r = ProductState::basis(2, &[0, 0]);
        let e = hadamard_test(&c, &l, &r, &cfg).unwrap();
        assert!(e.value.norm() <= 0.05);
    }

    #[test]
    fn estimate_relations_hold_exactly() {
        // value is a pure function of the observed frequencies.
        let c = hadamard_circuit(2);
        let cfg = EstimatorConfig::new(0.05, 0.01, 11);
        let l = ProductState::plus(2, 2);
        let r = ProductState::basis(2, &[0, 0]);
        let e = hadamard_test(&c, &l, &r, &cfg).unwrap();
        assert!((e.value.re - (2.0 * e.p0_re - 1.0)).abs() < 1e-15);
        assert!((e.value.im - (1.0 - 2.0 * e.p0_im)).abs() < 1e-15);
    }

    #[test]
    fn deterministic_replay() {
        let c = hadamard_circuit(3);
        let cfg = EstimatorConfig::new(0.02, 0.01, 42);
        let l = ProductState::plus(2, 3);
        let r = ProductState::basis(2, &[0, 1, 0]);
        let a = hadamard_test(&c, &l, &r, &cfg).unwrap();
        let b = hadamard_test(&c, &l, &r, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_non_unitary_circuits() {
        let mut c = Circuit::new(1, 2);
        c.push(diag(&[cr(2.0), C_ONE]), &[0], "boltzmann").unwrap();
        let cfg = EstimatorConfig::new(0.05, 0.01, 1);
        let l = ProductState::basis(2, &[0]);
        let res = hadamard_test(&c, &l, &l, &cfg);
        assert!(matches!(res, Err(EstimateError::NonUnitaryCircuit(_))));
    }

    #[test]
    fn rejects_bad_config() {
        let c = Circuit::new(1, 2);
        let l = ProductState::basis(2, &[0]);
        for cfg in [
            EstimatorConfig { shots: None, epsilon: 0.0, delta: 0.01, seed: 0 },
            EstimatorConfig { shots: None, epsilon: 0.05, delta: 1.5, seed: 0 },
            EstimatorConfig { shots: Some(0), epsilon: 0.05, delta: 0.01, seed: 0 },
        ] {
            assert!(hadamard_test(&c, &l, &l, &cfg).is_err());
        }
    }

    #[test]
    fn dqc1_identity_and_z() {
        let cfg = EstimatorConfig::new(0.05, 0.01, 5);
        let c = Circuit::new(3, 2);
        let e = dqc1_trace_estimate(&c, &cfg).unwrap();
        assert!((e.value - C_ONE).norm() < 0.06);
        // Z has normalized trace 0.
        let mut zc = Circuit::new(1, 2);
        zc.push(diag(&[C_ONE, -C_ONE]), &[0], "Z").unwrap();
        let e = dqc1_trace_estimate(&zc, &cfg).unwrap();
        assert!(e.value.norm() <= 0.06);
    }

    #[test]
    fn estimator_is_unbiased_over_seeds() {
        // mean over many seeds converges to the exact value within 3·stderr.
        let mut c = Circuit::new(1, 2);
        c.push(diag(&[C_ONE, cis(0.9)]), &[0], "P(0.9)").unwrap();
        let l = ProductState::plus(2, 1);
        let r = ProductState::plus(2, 1);
        let exact = qcirc::matrix_element(&c, &l, &r).unwrap();
        let seeds = 1000u64;
        let shots = 256u64;
        let mut sum = C_ZERO;
        let mut sum_sq = 0.0;
        for seed in 0..seeds {
            let cfg = EstimatorConfig { shots: Some(shots), epsilon: 0.1, delta: 0.05, seed };
            let e = hadamard_test(&c, &l, &r, &cfg).unwrap();
            sum += e.value;
            sum_sq += (e.value - exact).norm_sqr();
        }
        let mean = sum / seeds as f64;
        let stderr = (sum_sq / seeds as f64 / seeds as f64).sqrt();
        assert!(
            (mean - exact).norm() < 3.0 * stderr + 1e-9,
            "mean {mean} exact {exact} stderr {stderr}"
        );
    }

    #[test]
    fn mixture_uses_every_basis_state() {
        // A circuit whose diagonal varies per basis state: CZ.
        let mut c = Circuit::new(2, 2);
        c.push(diag(&[C_ONE, C_ONE, C_ONE, -C_ONE]), &[0, 1], "CZ").unwrap();
        let cfg = EstimatorConfig::new(0.05, 0.01, 17);
        let e = dqc1_trace_estimate(&c, &cfg).unwrap();
        // tr(CZ)/4 = (1+1+1-1)/4 = 1/2.
        assert!((e.value - cr(0.5)).norm() < 0.06);
    }
}
