//! Gate recipes: multi-step physical realizations of logical gates, executed
//! on a dense physical register and compared against the ideal logical
//! action.
//!
//! A recipe lists physical steps (each one a concrete gate with the lattice
//! parameters it came from), the logical encoding it acts in, the wires whose
//! spins are summed out at the end (teleportation consumes its source and
//! Bell registers this way), and the ideal logical matrix with its
//! normalization. Auxiliary spins are declared per step with fresh ids; the
//! executor refuses to run a recipe that reuses an auxiliary.

use crate::linalg::{kron, CMat, C_ONE, C_ZERO};
use crate::qcirc::{apply_gate, Gate, StateVector};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use super::EncodingsError;

/// The three logical encodings used by the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingKind {
    SixVertexHeisenberg,
    PottsQutrit,
    LgtFourQubit,
}

/// Map from logical basis states to physical states.
#[derive(Debug, Clone)]
pub struct LogicalEncoding {
    pub kind: EncodingKind,
    pub q: usize,
    pub physical_per_logical: usize,
    /// Dense physical vectors for |0⟩_L and |1⟩_L.
    pub basis: [Vec<Complex64>; 2],
}

impl LogicalEncoding {
    /// Embed a normalized logical state (2^k amplitudes over k logical
    /// qubits) into the physical register of `k · physical_per_logical`
    /// qudits.
    pub fn embed(&self, logical: &[Complex64]) -> Vec<Complex64> {
        let k = logical.len().trailing_zeros() as usize;
        assert_eq!(1 << k, logical.len(), "logical state must have 2^k amplitudes");
        let pdim = self.q.pow(self.physical_per_logical as u32);
        let mut out = vec![C_ZERO; pdim.pow(k as u32)];
        for (l, &amp) in logical.iter().enumerate() {
            if amp == C_ZERO {
                continue;
            }
            // Tensor the per-logical basis vectors for the bits of l.
            let mut block = vec![amp];
            for bit_pos in (0..k).rev() {
                let b = (l >> bit_pos) & 1;
                let mut next = Vec::with_capacity(block.len() * pdim);
                for &cur in &block {
                    for phys in &self.basis[b] {
                        next.push(cur * phys);
                    }
                }
                block = next;
            }
            for (i, v) in block.into_iter().enumerate() {
                out[i] += v;
            }
        }
        out
    }
}

/// The lattice parameters behind one physical step, kept for whitelist
/// checks and audit trails.
#[derive(Debug, Clone, PartialEq)]
pub enum StepParams {
    /// Potts-type gate with couplings `(μ,ν)`; `aux` is the pinned partner
    /// value for auxiliary contacts.
    PottsMuNu { mu: Complex64, nu: Complex64, aux: Option<u8> },
    /// LGT face gate: the face weight pair and the parity of its pinned
    /// spins; `temporal` separates time-direction faces from spatial ones.
    LgtFace { even: Complex64, odd: Complex64, fixed_parity: u8, temporal: bool },
    /// Six-vertex tensor gates (the continuous parameter, when meaningful).
    SixVertex { t: Option<f64> },
}

/// One physical step of a recipe.
#[derive(Debug, Clone)]
pub struct RecipeStep {
    pub matrix: CMat,
    pub targets: Vec<usize>,
    pub label: String,
    pub params: StepParams,
    /// Fresh auxiliary spins consumed by this step: `(id, pinned value)`.
    pub aux: Vec<(usize, u8)>,
}

/// A complete recipe for one logical gate.
#[derive(Debug, Clone)]
pub struct GateRecipe {
    pub name: String,
    pub encoding: LogicalEncoding,
    pub logical_width: usize,
    pub physical_width: usize,
    /// Register wires that carry the logical input, in order.
    pub input_wires: Vec<usize>,
    /// Register wires holding the logical output after execution.
    pub output_wires: Vec<usize>,
    /// Wires summed out (contracted with Σ_s ⟨s|) after the steps run.
    pub contracted_wires: Vec<usize>,
    /// Initial basis values for non-input wires.
    pub initial_basis: Vec<(usize, u8)>,
    pub steps: Vec<RecipeStep>,
    /// Ideal logical matrix (unitary).
    pub ideal: CMat,
    /// Executing the steps yields `normalization · ideal |ψ⟩_L`.
    pub normalization: Complex64,
    /// Approximation-scale data for ε-parameterized recipes: error bounded
    /// by `error_budget · ε^error_power` (quadratic for the Potts Hadamard,
    /// linear for the LGT physical identity).
    pub epsilon: Option<f64>,
    pub error_budget: Option<f64>,
    pub error_power: u8,
    /// Residual rotation left on the output by design (the teleported
    /// Hadamard leaves R_z(π/2), compensated in the next rotation's face
    /// phase).
    pub trailing_rz: Option<f64>,
}

impl GateRecipe {
    /// Execute the physical steps on `embed(logical_in) ⊗ initial wires`,
    /// contract the consumed wires, and return the dense state over the
    /// output wires.
    pub fn execute(&self, logical_in: &[Complex64]) -> Result<Vec<Complex64>, EncodingsError> {
        let q = self.encoding.q;
        let n = self.physical_width;
        // Auxiliary ids must be fresh across the whole run.
        let mut seen = BTreeSet::new();
        for s in &self.steps {
            for (id, _) in &s.aux {
                if !seen.insert(*id) {
                    return Err(EncodingsError::AuxReused(format!(
                        "auxiliary {id} reused in step '{}'",
                        s.label
                    )));
                }
            }
        }
        // Assemble the initial product state: embedded input on input_wires,
        // declared basis values elsewhere.
        let embedded = self.encoding.embed(logical_in);
        let mut factors: Vec<Vec<Complex64>> = vec![Vec::new(); n];
        for &(w, v) in &self.initial_basis {
            let mut f = vec![C_ZERO; q];
            f[v as usize] = C_ONE;
            factors[w] = f;
        }
        // The embedded block is generally entangled, so build the full dense
        // state: iterate over register indices, factoring out the input-wire
        // digits.
        let dim = q.pow(n as u32);
        let mut amps = vec![C_ZERO; dim];
        let stride = |w: usize| q.pow((n - 1 - w) as u32) as u64;
        let in_strides: Vec<u64> = self.input_wires.iter().map(|&w| stride(w)).collect();
        let other: Vec<usize> =
            (0..n).filter(|w| !self.input_wires.contains(w)).collect();
        for (idx, amp) in amps.iter_mut().enumerate() {
            let idx = idx as u64;
            let mut ok = true;
            let mut prod = C_ONE;
            for &w in &other {
                let d = (idx / stride(w)) % q as u64;
                let f = &factors[w];
                if f.is_empty() {
                    return Err(EncodingsError::BadParameter(format!(
                        "wire {w} has no declared initial state"
                    )));
                }
                if f[d as usize] == C_ZERO {
                    ok = false;
                    break;
                }
                prod *= f[d as usize];
            }
            if !ok {
                continue;
            }
            let mut emb_idx = 0u64;
            for s in &in_strides {
                emb_idx = emb_idx * q as u64 + (idx / s) % q as u64;
            }
            *amp = prod * embedded[emb_idx as usize];
        }
        let mut state = StateVector { n, q, amps };
        for s in &self.steps {
            let gate = Gate::new(s.matrix.clone(), s.targets.clone(), s.label.clone(), q, n)?;
            state = apply_gate(&state, &gate)?;
        }
        // Contract consumed wires with the all-ones covector and read out the
        // kept wires in output order.
        let kept = &self.output_wires;
        let out_dim = q.pow(kept.len() as u32);
        let mut out = vec![C_ZERO; out_dim];
        for (idx, amp) in state.amps.iter().enumerate() {
            if *amp == C_ZERO {
                continue;
            }
            let idx = idx as u64;
            let mut key = 0u64;
            for &w in kept {
                key = key * q as u64 + (idx / stride(w)) % q as u64;
            }
            out[key as usize] += amp;
        }
        Ok(out)
    }

    /// Distance between the executed output and `normalization·ideal|ψ⟩_L`.
    pub fn distance_to_ideal(&self, logical_in: &[Complex64]) -> Result<f64, EncodingsError> {
        let got = self.execute(logical_in)?;
        let mut ideal_out = vec![C_ZERO; logical_in.len()];
        for (r, iv) in ideal_out.iter_mut().enumerate() {
            for (c, &amp) in logical_in.iter().enumerate() {
                *iv += self.ideal[(r, c)] * amp;
            }
        }
        let expect = self
            .encoding
            .embed(&ideal_out)
            .into_iter()
            .map(|z| z * self.normalization)
            .collect::<Vec<_>>();
        if expect.len() != got.len() {
            return Err(EncodingsError::BadParameter(format!(
                "output register ({}) does not match logical embedding ({})",
                got.len(),
                expect.len()
            )));
        }
        let d2: f64 = got
            .iter()
            .zip(expect.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok(d2.sqrt())
    }
}

/// Verification report for a recipe.
#[derive(Debug, Clone)]
pub struct RecipeReport {
    pub name: String,
    pub trials: usize,
    pub max_distance: f64,
    pub fitted_slope: Option<f64>,
    pub pass: bool,
}

/// Random normalized logical state over `2^k` amplitudes.
pub fn random_logical_state(k: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let dim = 1usize << k;
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-9 {
        v[0] = C_ONE;
        return v;
    }
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Execute a recipe on random logical inputs and report the worst distance
/// to the ideal action. The pass threshold is the recipe's error budget when
/// it has one (`c·ε²`-style), else 1e-12.
pub fn verify_recipe(recipe: &GateRecipe, trials: usize, seed: u64) -> Result<RecipeReport, EncodingsError> {
    let distances = verify_recipe_distances(recipe, trials, seed)?;
    let max_distance = distances.into_iter().fold(0.0, f64::max);
    let bound = recipe_bound(recipe);
    Ok(RecipeReport {
        name: recipe.name.clone(),
        trials,
        max_distance,
        fitted_slope: None,
        pass: max_distance <= bound,
    })
}

pub fn recipe_bound(recipe: &GateRecipe) -> f64 {
    match (recipe.epsilon, recipe.error_budget) {
        (Some(eps), Some(c)) => c * eps.powi(recipe.error_power as i32),
        _ => 1e-12,
    }
}

fn verify_recipe_distances(
    recipe: &GateRecipe,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, EncodingsError> {
    let inputs: Vec<Vec<Complex64>> = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..trials).map(|_| random_logical_state(recipe.logical_width, &mut rng)).collect()
    };
    let results = crate::par::map_indexed(trials, |i| recipe.distance_to_ideal(&inputs[i]));
    results.into_iter().collect()
}

/// Fit the error exponent of an ε-parameterized recipe family by log-log
/// least squares over the given ε values; returns the slope and the measured
/// per-ε worst distances.
pub fn fitted_error_slope<F>(
    build: F,
    eps_values: &[f64],
    trials: usize,
    seed: u64,
) -> Result<(f64, Vec<(f64, f64)>), EncodingsError>
where
    F: Fn(f64) -> GateRecipe,
{
    let mut points = Vec::new();
    for &eps in eps_values {
        let recipe = build(eps);
        let d = verify_recipe_distances(&recipe, trials, seed)?
            .into_iter()
            .fold(0.0, f64::max);
        points.push((eps, d));
    }
    let xs: Vec<f64> = points.iter().map(|(e, _)| e.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, d)| d.max(1e-300).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok((sxy / sxx, points))
}

/// Ideal logical composition helper: multiply recipe ideals (with their
/// normalizations) in application order.
pub fn compose_ideals(recipes: &[&GateRecipe]) -> (CMat, Complex64) {
    let dim = recipes.first().map_or(1, |r| r.ideal.dim().0);
    let mut m = crate::linalg::eye(dim);
    let mut norm = C_ONE;
    for r in recipes {
        m = r.ideal.dot(&m);
        norm *= r.normalization;
    }
    (m, norm)
}

/// Tensor two single-logical ideals into a two-logical operator.
pub fn ideal_tensor(a: &CMat, b: &CMat) -> CMat {
    kron(a, b)
}
