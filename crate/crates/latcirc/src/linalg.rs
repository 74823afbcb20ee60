//! Small dense complex-matrix helpers shared by the circuit and encoding
//! modules: products, Kronecker products, the operator norm, and the
//! phase-insensitive distance used for gate identities.
//!
//! Everything here targets tiny matrices (at most 16×16); the operator norm is
//! the largest singular value obtained by power iteration on `A†A`.

use ndarray::Array2;
use num_complex::Complex64;

/// Dense complex matrix, the common coin of gates and logical operators.
pub type CMat = Array2<Complex64>;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

/// Real scalar promoted to a complex value.
pub fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `e^{iθ}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// Build a matrix from a nested slice, row by row.
pub fn mat(rows: &[&[Complex64]]) -> CMat {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let mut out = Array2::from_elem((r, c), C_ZERO);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), c, "ragged matrix literal");
        for (j, v) in row.iter().enumerate() {
            out[(i, j)] = *v;
        }
    }
    out
}

/// Square identity of dimension `n`.
pub fn eye(n: usize) -> CMat {
    let mut m = Array2::from_elem((n, n), C_ZERO);
    for i in 0..n {
        m[(i, i)] = C_ONE;
    }
    m
}

/// Diagonal matrix from its diagonal entries.
pub fn diag(entries: &[Complex64]) -> CMat {
    let n = entries.len();
    let mut m = Array2::from_elem((n, n), C_ZERO);
    for (i, v) in entries.iter().enumerate() {
        m[(i, i)] = *v;
    }
    m
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    let (r, c) = a.dim();
    let mut out = Array2::from_elem((c, r), C_ZERO);
    for i in 0..r {
        for j in 0..c {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

/// Matrix product `a·b`.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    a.dot(b)
}

/// Product of a sequence of matrices, left to right.
pub fn matprod(factors: &[&CMat]) -> CMat {
    let mut it = factors.iter();
    let first = it.next().expect("empty product");
    let mut acc = (*first).clone();
    for f in it {
        acc = acc.dot(*f);
    }
    acc
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::from_elem((ar * br, ac * bc), C_ZERO);
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Frobenius norm.
pub fn frobenius_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `tr(a)`.
pub fn mat_trace(a: &CMat) -> Complex64 {
    let n = a.dim().0.min(a.dim().1);
    (0..n).map(|i| a[(i, i)]).sum()
}

/// Largest singular value, by power iteration on `A†A`.
///
/// Converges to within ~1e-13 relative on the matrix sizes used here; a fixed
/// deterministic start vector keeps results reproducible.
pub fn operator_norm(a: &CMat) -> f64 {
    let (r, c) = a.dim();
    if r == 0 || c == 0 {
        return 0.0;
    }
    // 2x2 has a closed form via the Frobenius norm and determinant.
    if r == 2 && c == 2 {
        let f = a.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        let disc = (f * f - 4.0 * det.norm_sqr()).max(0.0);
        return ((f + disc.sqrt()) / 2.0).sqrt();
    }
    let ata = dagger(a).dot(a);
    // Deterministic, mildly irregular start vector to avoid orthogonal starts.
    let mut v: Vec<Complex64> = (0..c)
        .map(|i| Complex64::new(1.0 + (i as f64) * 0.137, 0.31 * ((i * i) as f64 % 7.0)))
        .collect();
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nv = norm(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    let mut lambda = 0.0f64;
    for _ in 0..500 {
        let mut w = vec![C_ZERO; c];
        for i in 0..c {
            let mut acc = C_ZERO;
            for j in 0..c {
                acc += ata[(i, j)] * v[j];
            }
            w[i] = acc;
        }
        let nw = norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        w.iter_mut().for_each(|z| *z /= nw);
        let next = nw;
        let done = (next - lambda).abs() <= 1e-15 * next.max(1.0);
        lambda = next;
        v = w;
        if done {
            break;
        }
    }
    lambda.sqrt()
}

/// Minimum over unit phases φ of the operator norm `‖a − e^{iφ}b‖`.
///
/// A coarse phase grid locates the basin, then golden-section refinement pins
/// the minimizer; the Frobenius-optimal phase is also tried since it is exact
/// whenever `a` and `b` are genuinely proportional.
pub fn distance_up_to_phase(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim(), "distance_up_to_phase: shape mismatch");
    let g = |phi: f64| {
        let e = cis(phi);
        let diff = a - &b.mapv(|z| z * e);
        operator_norm(&diff)
    };
    // Frobenius-optimal phase: minimizes ‖a − e^{iφ}b‖_F at φ = arg tr(b†a).
    let overlap = mat_trace(&dagger(b).dot(a));
    let mut best_phi = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
    let mut best = g(best_phi);
    const GRID: usize = 256;
    for k in 0..GRID {
        let phi = 2.0 * std::f64::consts::PI * (k as f64) / (GRID as f64);
        let v = g(phi);
        if v < best {
            best = v;
            best_phi = phi;
        }
    }
    // Golden-section refine around the best grid point.
    let span = 2.0 * std::f64::consts::PI / (GRID as f64);
    let (mut lo, mut hi) = (best_phi - span, best_phi + span);
    let inv_phi = 0.618_033_988_749_894_9;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        }
    }
    best.min(f1).min(f2)
}

/// Max-entry distance `max_ij |a_ij − b_ij|`; cheap exact-equality checks.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Whether `u†u = I` holds entrywise within `tol`.
pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    let (r, c) = u.dim();
    if r != c {
        return false;
    }
    max_abs_diff(&dagger(u).dot(u), &eye(r)) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn operator_norm_of_scaled_identity() {
        let m = eye(4).mapv(|z| z * cr(3.5));
        assert_abs_diff_eq!(operator_norm(&m), 3.5, epsilon = 1e-12);
    }

    #[test]
    fn operator_norm_of_rank_one() {
        // |v><w| has norm ‖v‖‖w‖.
        let mut m = Array2::from_elem((3, 3), C_ZERO);
        let v = [cr(1.0), cr(2.0), cr(-1.0)];
        let w = [cr(0.5), C_I, cr(1.0)];
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = v[i] * w[j].conj();
            }
        }
        let expect = (6.0f64).sqrt() * (2.25f64).sqrt();
        assert_abs_diff_eq!(operator_norm(&m), expect, epsilon = 1e-10);
    }

    #[test]
    fn phase_distance_is_phase_invariant() {
        let u = mat(&[
            &[cr(1.0 / 2f64.sqrt()), cr(1.0 / 2f64.sqrt())],
            &[cr(1.0 / 2f64.sqrt()), cr(-1.0 / 2f64.sqrt())],
        ]);
        let rotated = u.mapv(|z| z * cis(std::f64::consts::PI / 7.0));
        assert!(distance_up_to_phase(&u, &rotated) < 1e-12);
    }

    #[test]
    fn phase_distance_detects_distinct_gates() {
        let z = diag(&[C_ONE, -C_ONE]);
        let x = mat(&[&[C_ZERO, C_ONE], &[C_ONE, C_ZERO]]);
        let d = distance_up_to_phase(&z, &x);
        assert!(d > 1.0, "Z and X are far apart up to phase, got {d}");
    }

    #[test]
    fn kron_dimensions_and_values() {
        let a = diag(&[cr(2.0), cr(3.0)]);
        let b = eye(3);
        let k = kron(&a, &b);
        assert_eq!(k.dim(), (6, 6));
        assert_eq!(k[(0, 0)], cr(2.0));
        assert_eq!(k[(5, 5)], cr(3.0));
        assert_eq!(k[(0, 3)], C_ZERO);
    }
}
