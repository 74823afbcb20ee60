//! Edge models (Ising, Potts) on planar circuit graphs: spins on vertices,
//! pairwise Boltzmann weights on edges, optional per-site field weights.

use super::graph::PlanarCircuitGraph;
use super::plan::{OraclePlan, Slot, Term};
use super::{BoundaryCondition, SpinlatError};
use crate::linalg::C_ONE;
use num_complex::Complex64;

/// `q×q` pairwise weight table; entry `(a,b)` is the weight with the left
/// (respectively upper) vertex in state `a` and the right (lower) in `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeTable {
    q: usize,
    w: Vec<Complex64>,
}

impl EdgeTable {
    pub fn new(q: usize, w: Vec<Complex64>) -> Result<Self, SpinlatError> {
        if w.len() != q * q {
            return Err(SpinlatError::MalformedGeometry(format!(
                "edge table needs q² = {} entries, got {}",
                q * q,
                w.len()
            )));
        }
        Ok(EdgeTable { q, w })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn get(&self, a: u8, b: u8) -> Complex64 {
        self.w[a as usize * self.q + b as usize]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.w
    }

    /// Two-valued table: `mu` on the diagonal, `nu` off it. The Ising table
    /// `[[e^{βJ},1],[1,e^{βJ}]]` is `two_valued(2, e^{βJ}, 1)`; the Potts
    /// table of `(μ,ν)` is `two_valued(q, μ, ν)`.
    pub fn two_valued(q: usize, mu: Complex64, nu: Complex64) -> Self {
        let mut w = vec![nu; q * q];
        for a in 0..q {
            w[a * q + a] = mu;
        }
        EdgeTable { q, w }
    }

    /// Physical Ising coupling at inverse temperature `beta`: the weight
    /// `e^{βJ}` sits on equal spins.
    pub fn ising_physical(beta: f64, j: f64) -> Self {
        Self::two_valued(2, crate::linalg::cr((beta * j).exp()), C_ONE)
    }

    /// The `(μ,ν)` pair when the table is two-valued within `tol`.
    pub fn as_mu_nu(&self, tol: f64) -> Option<(Complex64, Complex64)> {
        let mu = self.get(0, 0);
        let nu = if self.q > 1 { self.get(0, 1) } else { C_ONE };
        for a in 0..self.q as u8 {
            for b in 0..self.q as u8 {
                let expect = if a == b { mu } else { nu };
                if (self.get(a, b) - expect).norm() > tol {
                    return None;
                }
            }
        }
        Some((mu, nu))
    }
}

/// Per-site diagonal weight table of length `q`; all-ones when no field.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteTable {
    q: usize,
    w: Vec<Complex64>,
}

impl SiteTable {
    pub fn new(q: usize, w: Vec<Complex64>) -> Result<Self, SpinlatError> {
        if w.len() != q {
            return Err(SpinlatError::MalformedGeometry(format!(
                "site table needs q = {q} entries, got {}",
                w.len()
            )));
        }
        Ok(SiteTable { q, w })
    }

    /// The fieldless table (all ones).
    pub fn identity(q: usize) -> Self {
        SiteTable { q, w: vec![C_ONE; q] }
    }

    /// Ising field table `diag(e^{βh}, 1)`: the weight sits on spin 0.
    pub fn ising_field(e_beta_h: Complex64) -> Self {
        SiteTable { q: 2, w: vec![e_beta_h, C_ONE] }
    }

    /// Physical Ising field at inverse temperature `beta`.
    pub fn ising_field_physical(beta: f64, h: f64) -> Self {
        Self::ising_field(crate::linalg::cr((beta * h).exp()))
    }

    /// Fold a contact with an auxiliary spin pinned to `aux` through a
    /// `(μ,ν)` coupling into this site's diagonal weight.
    pub fn fold_contact(&mut self, mu: Complex64, nu: Complex64, aux: u8) {
        for (v, w) in self.w.iter_mut().enumerate() {
            *w *= if v as u8 == aux { mu } else { nu };
        }
    }

    #[inline]
    pub fn get(&self, a: u8) -> Complex64 {
        self.w[a as usize]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.w
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.w.iter().all(|z| (z - C_ONE).norm() <= tol)
    }
}

/// Edge model instance: weight tables attached to a planar circuit graph.
#[derive(Debug, Clone)]
pub struct EdgeModel {
    pub graph: PlanarCircuitGraph,
    pub q: usize,
    /// Parallel to `graph.horizontal_edges()`.
    pub horizontal_weights: Vec<EdgeTable>,
    /// Parallel to `graph.vertical_edges()`.
    pub vertical_weights: Vec<EdgeTable>,
    /// Parallel to `graph.vertices()`.
    pub vertex_weights: Vec<SiteTable>,
    pub boundary: BoundaryCondition,
}

impl EdgeModel {
    pub fn new(
        graph: PlanarCircuitGraph,
        q: usize,
        horizontal_weights: Vec<EdgeTable>,
        vertical_weights: Vec<EdgeTable>,
        vertex_weights: Vec<SiteTable>,
        boundary: BoundaryCondition,
    ) -> Result<Self, SpinlatError> {
        if q < 2 {
            return Err(SpinlatError::MalformedGeometry("edge model needs q >= 2".into()));
        }
        if horizontal_weights.len() != graph.horizontal_edges().len()
            || vertical_weights.len() != graph.vertical_edges().len()
            || vertex_weights.len() != graph.vertices().len()
        {
            return Err(SpinlatError::MalformedGeometry(format!(
                "weight lists ({}, {}, {}) do not match graph ({}, {}, {})",
                horizontal_weights.len(),
                vertical_weights.len(),
                vertex_weights.len(),
                graph.horizontal_edges().len(),
                graph.vertical_edges().len(),
                graph.vertices().len()
            )));
        }
        if horizontal_weights.iter().any(|t| t.q() != q)
            || vertical_weights.iter().any(|t| t.q() != q)
            || vertex_weights.iter().any(|t| t.q != q)
        {
            return Err(SpinlatError::MalformedGeometry("table dimension mismatch".into()));
        }
        boundary.validate(graph.n(), q)?;
        Ok(EdgeModel { graph, q, horizontal_weights, vertical_weights, vertex_weights, boundary })
    }

    /// Uniform Ising instance: one coupling on every edge, one field on every
    /// site.
    pub fn ising_uniform(
        graph: PlanarCircuitGraph,
        e_beta_j: Complex64,
        e_beta_h: Complex64,
        boundary: BoundaryCondition,
    ) -> Result<Self, SpinlatError> {
        let table = EdgeTable::two_valued(2, e_beta_j, C_ONE);
        let site = SiteTable::ising_field(e_beta_h);
        let h = vec![table.clone(); graph.horizontal_edges().len()];
        let v = vec![table; graph.vertical_edges().len()];
        let s = vec![site; graph.vertices().len()];
        Self::new(graph, 2, h, v, s, boundary)
    }

    /// Uniform Potts instance with couplings `(μ,ν)` and no fields.
    pub fn potts_uniform(
        graph: PlanarCircuitGraph,
        q: usize,
        mu: Complex64,
        nu: Complex64,
        boundary: BoundaryCondition,
    ) -> Result<Self, SpinlatError> {
        let table = EdgeTable::two_valued(q, mu, nu);
        let h = vec![table.clone(); graph.horizontal_edges().len()];
        let v = vec![table; graph.vertical_edges().len()];
        let s = vec![SiteTable::identity(q); graph.vertices().len()];
        Self::new(graph, q, h, v, s, boundary)
    }

    /// Flatten into the shared enumeration plan. Free spins are the graph
    /// vertices in id order (row-major by construction), minus pinned
    /// boundary vertices; periodic boundaries identify each row's rightmost
    /// vertex with its leftmost.
    pub fn oracle_plan(&self) -> Result<OraclePlan, SpinlatError> {
        let nv = self.graph.vertices().len();
        let mut slots: Vec<Option<Slot>> = vec![None; nv];
        let mut contradictory = false;
        match &self.boundary {
            BoundaryCondition::Fixed { left, right } => {
                for (row, &v) in self.graph.left_boundary().iter().enumerate() {
                    slots[v] = Some(Slot::Pinned(left[row]));
                }
                for (row, &v) in self.graph.right_boundary().iter().enumerate() {
                    if let Some(Slot::Pinned(prev)) = slots[v] {
                        if prev != right[row] {
                            contradictory = true;
                        }
                    } else {
                        slots[v] = Some(Slot::Pinned(right[row]));
                    }
                }
            }
            BoundaryCondition::Open => {}
            BoundaryCondition::Periodic => {
                // Right boundary vertex aliases the left one of the same row;
                // both field tables still apply.
                let mut free = 0usize;
                let lefts = self.graph.left_boundary();
                let rights = self.graph.right_boundary();
                for v in 0..nv {
                    if slots[v].is_some() {
                        continue;
                    }
                    if let Some(row) = rights.iter().position(|&r| r == v) {
                        let l = lefts[row];
                        if l != v {
                            if slots[l].is_none() {
                                slots[l] = Some(Slot::Free(free));
                                free += 1;
                            }
                            slots[v] = slots[l];
                            continue;
                        }
                    }
                    slots[v] = Some(Slot::Free(free));
                    free += 1;
                }
            }
        }
        let mut free = slots
            .iter()
            .filter_map(|s| match s {
                Some(Slot::Free(i)) => Some(*i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        for s in slots.iter_mut() {
            if s.is_none() {
                *s = Some(Slot::Free(free));
                free += 1;
            }
        }
        let slot = |v: usize| slots[v].expect("all vertices assigned");
        let mut terms = Vec::new();
        for (e, table) in self.graph.horizontal_edges().iter().zip(&self.horizontal_weights) {
            terms.push(Term::Pair { a: slot(e.left), b: slot(e.right), table: table.entries().to_vec() });
        }
        for (e, table) in self.graph.vertical_edges().iter().zip(&self.vertical_weights) {
            terms.push(Term::Pair { a: slot(e.top), b: slot(e.bottom), table: table.entries().to_vec() });
        }
        for (v, table) in self.vertex_weights.iter().enumerate() {
            if !table.is_identity(0.0) {
                terms.push(Term::Single { a: slot(v), table: table.entries().to_vec() });
            }
        }
        Ok(OraclePlan { q: self.q, free, terms, contradictory })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, C_I};
    use crate::spinlat::EnumLimits;

    fn chain_graph(m: usize) -> PlanarCircuitGraph {
        PlanarCircuitGraph::full_grid(1, m).unwrap()
    }

    #[test]
    fn single_ising_edge_open_boundary() {
        // One edge with e^{βJ}=2, both spins free: Z = 2+1+1+2 = 6.
        let model = EdgeModel::ising_uniform(chain_graph(2), cr(2.0), C_ONE, BoundaryCondition::Open).unwrap();
        let z = model.oracle_plan().unwrap().brute_force(&EnumLimits::default()).unwrap().z;
        assert!((z - cr(6.0)).norm() < 1e-13);
    }

    #[test]
    fn single_edge_fixed_boundary_reads_table_entry() {
        let model = EdgeModel::ising_uniform(
            chain_graph(2),
            cr(2.0),
            C_ONE,
            BoundaryCondition::Fixed { left: vec![0], right: vec![0] },
        )
        .unwrap();
        let z = model.oracle_plan().unwrap().brute_force(&EnumLimits::default()).unwrap().z;
        assert!((z - cr(2.0)).norm() < 1e-14);
    }

    #[test]
    fn potts_vertical_edge_signs() {
        // q=3, single vertical edge with (μ,ν)=(−1,1): Z = −1 if u=v else 1.
        let g = PlanarCircuitGraph::full_grid(2, 1).unwrap();
        for (u, v, expect) in [(0u8, 0u8, cr(-1.0)), (1, 2, cr(1.0))] {
            let model = EdgeModel::potts_uniform(
                g.clone(),
                3,
                cr(-1.0),
                C_ONE,
                BoundaryCondition::Fixed { left: vec![u, v], right: vec![u, v] },
            )
            .unwrap();
            let z = model.oracle_plan().unwrap().brute_force(&EnumLimits::default()).unwrap().z;
            assert!((z - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn periodic_identifies_row_ends() {
        // 1x3 chain, periodic: left and right vertices carry the same spin.
        // With e^{βJ}=i on both edges and no fields:
        // Z = Σ_{s0,s1,s2: s2≡s0} w(s0,s1) w(s1,s2) = Σ_{s0,s1} w(s0,s1)².
        let model = EdgeModel::ising_uniform(chain_graph(3), C_I, C_ONE, BoundaryCondition::Periodic).unwrap();
        let plan = model.oracle_plan().unwrap();
        assert_eq!(plan.free, 2);
        let z = plan.brute_force(&EnumLimits::default()).unwrap().z;
        // s0=s1: i² twice; s0≠s1: 1 twice → 2·(−1) + 2·1 = 0.
        assert!(z.norm() < 1e-13);
    }

    #[test]
    fn contradictory_fixed_boundary_gives_zero() {
        // Fully contracted row: the single vertex is both boundaries.
        let contracted: std::collections::BTreeSet<_> = [(0usize, 0usize)].into_iter().collect();
        let g = PlanarCircuitGraph::new(1, 2, Default::default(), contracted).unwrap();
        let model = EdgeModel::ising_uniform(
            g,
            cr(2.0),
            C_ONE,
            BoundaryCondition::Fixed { left: vec![0], right: vec![1] },
        )
        .unwrap();
        let z = model.oracle_plan().unwrap().brute_force(&EnumLimits::default()).unwrap().z;
        assert_eq!(z, crate::linalg::C_ZERO);
    }
}
