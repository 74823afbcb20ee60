//! Potts logical gates on the two-qutrit encoding `|0⟩_L = |0⟩|1⟩`,
//! `|1⟩_L = |1⟩|2⟩`: identities, the π/8 phase, CZ, and the seven-step
//! Hadamard with its ε filters.
//!
//! Physical wires per logical qubit: the upper qutrit, then the lower one.
//! Auxiliary qutrits are pinned classical spins, so a two-qutrit gate against
//! an auxiliary folds to a diagonal single-qutrit gate on the physical side;
//! every step still records the `(μ,ν)` pair and the auxiliary value it came
//! from.

use super::recipe::{EncodingKind, GateRecipe, LogicalEncoding, RecipeStep, StepParams};
use super::EncodingsError;
use crate::linalg::{cis, cr, diag, eye, mat, CMat, C_I, C_ONE, C_ZERO};
use num_complex::Complex64;

pub fn potts_encoding() -> LogicalEncoding {
    let mut zero = vec![C_ZERO; 9];
    zero[1] = C_ONE; // |0⟩|1⟩
    let mut one = vec![C_ZERO; 9];
    one[5] = C_ONE; // |1⟩|2⟩
    LogicalEncoding { kind: EncodingKind::PottsQutrit, q: 3, physical_per_logical: 2, basis: [zero, one] }
}

/// Diagonal gate from a contact between a physical qutrit and an auxiliary
/// pinned to `aux`, through couplings `(μ,ν)`.
fn aux_contact_matrix(mu: Complex64, nu: Complex64, aux: u8) -> CMat {
    let entries: Vec<Complex64> = (0..3).map(|v| if v == aux { mu } else { nu }).collect();
    diag(&entries)
}

/// Diagonal two-qutrit gate between two physical qutrits with `(μ,ν)`.
fn pair_matrix(mu: Complex64, nu: Complex64) -> CMat {
    let entries: Vec<Complex64> = (0..9)
        .map(|i| if i / 3 == i % 3 { mu } else { nu })
        .collect();
    diag(&entries)
}

/// Full single-qutrit gate from a time-direction edge with `(μ,ν)`.
fn single_matrix(mu: Complex64, nu: Complex64) -> CMat {
    let mut m = ndarray::Array2::from_elem((3, 3), nu);
    for i in 0..3 {
        m[(i, i)] = mu;
    }
    m
}

struct PottsBuilder {
    steps: Vec<RecipeStep>,
    next_aux: usize,
}

impl PottsBuilder {
    fn new() -> Self {
        PottsBuilder { steps: Vec::new(), next_aux: 0 }
    }

    fn contact(&mut self, wire: usize, aux: u8, mu: Complex64, nu: Complex64, label: &str) {
        let id = self.next_aux;
        self.next_aux += 1;
        self.steps.push(RecipeStep {
            matrix: aux_contact_matrix(mu, nu, aux),
            targets: vec![wire],
            label: label.to_string(),
            params: StepParams::PottsMuNu { mu, nu, aux: Some(aux) },
            aux: vec![(id, aux)],
        });
    }

    fn pair(&mut self, a: usize, b: usize, mu: Complex64, nu: Complex64, label: &str) {
        self.steps.push(RecipeStep {
            matrix: pair_matrix(mu, nu),
            targets: vec![a, b],
            label: label.to_string(),
            params: StepParams::PottsMuNu { mu, nu, aux: None },
            aux: vec![],
        });
    }

    fn single(&mut self, wire: usize, mu: Complex64, nu: Complex64, label: &str) {
        self.steps.push(RecipeStep {
            matrix: single_matrix(mu, nu),
            targets: vec![wire],
            label: label.to_string(),
            params: StepParams::PottsMuNu { mu, nu, aux: None },
            aux: vec![],
        });
    }
}

fn recipe(
    name: &str,
    logical_width: usize,
    steps: Vec<RecipeStep>,
    ideal: CMat,
) -> GateRecipe {
    let wires = 2 * logical_width;
    GateRecipe {
        name: name.to_string(),
        encoding: potts_encoding(),
        logical_width,
        physical_width: wires,
        input_wires: (0..wires).collect(),
        output_wires: (0..wires).collect(),
        contracted_wires: vec![],
        initial_basis: vec![],
        steps,
        ideal,
        normalization: C_ONE,
        epsilon: None,
        error_budget: None,
        error_power: 2,
        trailing_rz: None,
    }
}

/// Logical single-qubit identity: the `(1,1)` gate between the two physical
/// qutrits.
pub fn potts_i1() -> GateRecipe {
    let mut b = PottsBuilder::new();
    b.pair(0, 1, C_ONE, C_ONE, "I1 (1,1) upper-lower");
    recipe("potts_i1", 1, b.steps, eye(2))
}

/// Logical `P_{π/8} = diag(1, e^{iπ/8})`: an `(e^{iπ/8},1)` contact between
/// an auxiliary in `|2⟩` and the lower qutrit.
pub fn potts_p8() -> GateRecipe {
    let mut b = PottsBuilder::new();
    b.contact(1, 2, cis(std::f64::consts::PI / 8.0), C_ONE, "P (e^{ipi/8},1) aux|2> lower");
    recipe("potts_p8", 1, b.steps, diag(&[C_ONE, cis(std::f64::consts::PI / 8.0)]))
}

/// Logical two-qubit identity: `(1,1)` on both logical qubits.
pub fn potts_i2() -> GateRecipe {
    let mut b = PottsBuilder::new();
    b.pair(0, 1, C_ONE, C_ONE, "I2 (1,1) first");
    b.pair(2, 3, C_ONE, C_ONE, "I2 (1,1) second");
    recipe("potts_i2", 2, b.steps, eye(4))
}

/// Logical controlled-Z: `(−1,1)` between the lower qutrit of the first
/// logical qubit and the upper qutrit of the second, plus the same gate
/// against an auxiliary `|2⟩` on the second lower qutrit.
pub fn potts_cz() -> GateRecipe {
    let mut b = PottsBuilder::new();
    b.pair(1, 2, -C_ONE, C_ONE, "CZ (-1,1) lower1-upper2");
    b.contact(3, 2, -C_ONE, C_ONE, "CZ (-1,1) aux|2> lower2");
    recipe("potts_cz", 2, b.steps, diag(&[C_ONE, C_ONE, C_ONE, -C_ONE]))
}

/// Upper bound coefficient for the Hadamard recipe error `c·ε²`, measured
/// once over random logical inputs (worst case `|α+β|ε²/√2 ≤ ε²`) and frozen
/// with 2× headroom.
pub const POTTS_H_ERROR_COEFF: f64 = 2.0;

/// The seven-step logical Hadamard at filter strength `ε ∈ (0, 0.1]`.
///
/// Steps: a `(−i,1)` phase on the lower qutrit, the `(−i,1)`/`(1,1)`
/// spreading single-qutrit gates, the `(0,1)` filters (auxiliaries `|2⟩` on
/// the upper and `|0⟩` on the lower qutrit), the `(0,1)` upper-lower pair,
/// the `(ε,1)` then `((√2ε)^{-1},1)` filter ladder, two `(i,1)` phases on
/// the upper qutrit, and a closing `(−i,1)` on the lower. Exact up to the
/// `O(ε²)` component left in `|0⟩|2⟩`.
pub fn potts_h(eps: f64) -> Result<GateRecipe, EncodingsError> {
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(EncodingsError::BadEpsilon(eps));
    }
    let (up, lo) = (0usize, 1usize);
    let mut b = PottsBuilder::new();
    // 1. phase -i onto |1⟩_L through the lower qutrit's |2⟩ component
    b.contact(lo, 2, -C_I, C_ONE, "H1 (-i,1) aux|2> lower");
    // 2. spreading single-qutrit gates
    b.single(up, -C_I, C_ONE, "H2 (-i,1) upper");
    b.single(lo, C_ONE, C_ONE, "H2 (1,1) lower");
    // 3. component filters
    b.contact(up, 2, C_ZERO, C_ONE, "H3 (0,1) aux|2> upper");
    b.contact(lo, 0, C_ZERO, C_ONE, "H3 (0,1) aux|0> lower");
    // 4. anti-diagonal filter between the two physical qutrits
    b.pair(up, lo, C_ZERO, C_ONE, "H4 (0,1) upper-lower");
    // 5. ε filter ladder
    b.contact(up, 0, cr(eps), C_ONE, "H5 (eps,1) aux|0> upper");
    b.contact(lo, 2, cr(eps), C_ONE, "H5 (eps,1) aux|2> lower");
    let inv = cr(1.0 / (eps * 2f64.sqrt()));
    b.contact(up, 1, inv, C_ONE, "H5 (1/(sqrt2 eps),1) aux|1> upper");
    b.contact(lo, 1, inv, C_ONE, "H5 (1/(sqrt2 eps),1) aux|1> lower");
    // 6. phase restoration on the upper qutrit
    b.contact(up, 0, C_I, C_ONE, "H6 (i,1) aux|0> upper");
    b.contact(up, 1, C_I, C_ONE, "H6 (i,1) aux|1> upper");
    // 7. closing phase on the lower qutrit
    b.contact(lo, 2, -C_I, C_ONE, "H7 (-i,1) aux|2> lower");
    let s = cr(1.0 / 2f64.sqrt());
    let mut r = recipe("potts_h", 1, b.steps, mat(&[&[s, s], &[s, -s]]));
    r.epsilon = Some(eps);
    r.error_budget = Some(POTTS_H_ERROR_COEFF);
    Ok(r)
}

/// The full logical gate set: `{I1, P_{π/8}, H(ε), I2, CZ}`.
pub fn potts_logical_gates(eps: f64) -> Result<Vec<GateRecipe>, EncodingsError> {
    Ok(vec![potts_i1(), potts_p8(), potts_h(eps)?, potts_i2(), potts_cz()])
}

/// Coupling pairs allowed for Potts instances at filter strength ε: the
/// published set plus the `(i,1)` pair the seven-step Hadamard uses.
pub fn potts_allowed_mu_nu(eps: f64) -> Vec<(Complex64, Complex64)> {
    vec![
        (C_ONE, C_ZERO),
        (cis(std::f64::consts::PI / 8.0), C_ONE),
        (-C_I, C_ONE),
        (C_ONE, C_ONE),
        (C_ZERO, C_ONE),
        (cr(eps), C_ONE),
        (cr(1.0 / (2f64.sqrt() * eps)), C_ONE),
        (-C_ONE, C_ONE),
        (C_I, C_ONE),
    ]
}

/// Whether `(μ,ν)` is in the allowed set within `tol`.
pub fn is_allowed_mu_nu(mu: Complex64, nu: Complex64, eps: f64, tol: f64) -> bool {
    potts_allowed_mu_nu(eps)
        .into_iter()
        .any(|(m, n)| (mu - m).norm() <= tol && (nu - n).norm() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::recipe::{fitted_error_slope, random_logical_state, verify_recipe};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn i1_is_exact_identity() {
        let rep = verify_recipe(&potts_i1(), 10, 7).unwrap();
        assert!(rep.pass, "max distance {}", rep.max_distance);
        assert!(rep.max_distance < 1e-12);
    }

    #[test]
    fn p8_phases_logical_one() {
        let r = potts_p8();
        let out = r.execute(&[C_ZERO, C_ONE]).unwrap();
        // |1⟩_L = |1⟩|2⟩ sits at index 1*3+2 = 5.
        assert!((out[5] - cis(std::f64::consts::PI / 8.0)).norm() < 1e-14);
        let rep = verify_recipe(&r, 10, 11).unwrap();
        assert!(rep.max_distance < 1e-12);
    }

    #[test]
    fn i2_and_cz_are_exact() {
        assert!(verify_recipe(&potts_i2(), 10, 3).unwrap().max_distance < 1e-12);
        let cz = potts_cz();
        assert!(verify_recipe(&cz, 10, 5).unwrap().max_distance < 1e-12);
        // |1⟩_L|1⟩_L flips sign, the other basis pairs do not.
        for (l, sign) in [(0usize, 1.0), (1, 1.0), (2, 1.0), (3, -1.0)] {
            let mut input = vec![C_ZERO; 4];
            input[l] = C_ONE;
            let out = cz.execute(&input).unwrap();
            let expect = cz.encoding.embed(&input);
            for (o, e) in out.iter().zip(expect.iter()) {
                assert!((o - e * cr(sign)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn hadamard_recipe_tracks_the_seven_step_state() {
        // ε → small: H|ψ⟩ exactly, plus an O(ε²) component in |0⟩|2⟩.
        let eps = 1e-3;
        let r = potts_h(eps).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let out = r.execute(&[C_ONE, C_ZERO]).unwrap();
        assert!((out[1] - cr(s)).norm() < 1e-5);
        assert!((out[5] - cr(s)).norm() < 1e-5);
        // the junk term: −i(α+β)ε² in |02⟩ (index 2)
        assert!((out[2] - (-C_I) * cr(eps * eps)).norm() < 1e-12);
        let rep = verify_recipe(&r, 20, 13).unwrap();
        assert!(rep.pass, "distance {} budget {}", rep.max_distance, POTTS_H_ERROR_COEFF * eps * eps);
    }

    #[test]
    fn hadamard_error_scales_quadratically() {
        let (slope, points) =
            fitted_error_slope(|e| potts_h(e).unwrap(), &[1e-2, 3e-3, 1e-3], 10, 17).unwrap();
        assert!(
            (slope - 2.0).abs() < 0.2,
            "slope {slope}, points {points:?}"
        );
    }

    #[test]
    fn hadamard_rejects_bad_epsilon() {
        assert!(matches!(potts_h(0.0), Err(EncodingsError::BadEpsilon(_))));
        assert!(matches!(potts_h(0.2), Err(EncodingsError::BadEpsilon(_))));
    }

    #[test]
    fn all_steps_use_allowed_couplings() {
        let eps = 1e-3;
        for r in potts_logical_gates(eps).unwrap() {
            for s in &r.steps {
                match s.params {
                    StepParams::PottsMuNu { mu, nu, .. } => {
                        assert!(
                            is_allowed_mu_nu(mu, nu, eps, 1e-12),
                            "({mu}, {nu}) not allowed in {}",
                            s.label
                        );
                    }
                    _ => panic!("potts recipe with non-potts step"),
                }
            }
        }
    }

    #[test]
    fn random_states_embed_consistently() {
        let enc = potts_encoding();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = random_logical_state(2, &mut rng);
        let emb = enc.embed(&psi);
        let norm: f64 = emb.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        // |00⟩_L component lands at physical |0101⟩ = index 0*27+1*9+0*3+1.
        assert!((emb[10] - psi[0]).norm() < 1e-12);
    }
}
