//! Z2 lattice gauge theory on a 3D rectangular lattice: spins on edges,
//! parity interactions on faces.
//!
//! `extents = (X, Y, Z)` counts unit cells, so vertices run over
//! `(0..=X, 0..=Y, 0..=Z)`. The z axis is the designated time direction:
//! xy faces are spatial (diagonal gates), xz/yz faces are temporal.
//!
//! A face weight is stored as the pair `(even, odd)` applied according to the
//! mod-2 sum of its four boundary spins. The plain coupling `e^{βJ}` is
//! `(e^{βJ}, 1)`; the energy-shifted identity face used for the physical
//! single-qubit identity is `(1, ζ)`; absent faces are inert `(1, 1)`.
//!
//! Spins can be pinned three ways: `gauge_fixed` (must stay acyclic, checked
//! by [`LgtModel::validate_gauge_fixing`]), `clamped` (instance-level fixing
//! that plays the role of fixed boundary data in the interior), and the
//! left/right boundary configuration over the spatial edges of the first and
//! last time slice.

use super::plan::{OraclePlan, Slot, Term};
use super::{BoundaryCondition, SpinlatError};
use crate::linalg::C_ONE;
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis3 {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Plane3 {
    Xy,
    Xz,
    Yz,
}

/// Lattice edge from vertex `(x,y,z)` one step along `dir`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId3 {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub dir: Axis3,
}

impl EdgeId3 {
    pub fn new(x: usize, y: usize, z: usize, dir: Axis3) -> Self {
        EdgeId3 { x, y, z, dir }
    }

    pub fn endpoints(&self) -> ((usize, usize, usize), (usize, usize, usize)) {
        let a = (self.x, self.y, self.z);
        let b = match self.dir {
            Axis3::X => (self.x + 1, self.y, self.z),
            Axis3::Y => (self.x, self.y + 1, self.z),
            Axis3::Z => (self.x, self.y, self.z + 1),
        };
        (a, b)
    }
}

/// Lattice face with lower corner `(x,y,z)` spanning `plane`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId3 {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub plane: Plane3,
}

impl FaceId3 {
    pub fn new(x: usize, y: usize, z: usize, plane: Plane3) -> Self {
        FaceId3 { x, y, z, plane }
    }

    /// The four boundary edges of this face.
    pub fn edges(&self) -> [EdgeId3; 4] {
        let (x, y, z) = (self.x, self.y, self.z);
        match self.plane {
            Plane3::Xy => [
                EdgeId3::new(x, y, z, Axis3::X),
                EdgeId3::new(x, y + 1, z, Axis3::X),
                EdgeId3::new(x, y, z, Axis3::Y),
                EdgeId3::new(x + 1, y, z, Axis3::Y),
            ],
            Plane3::Xz => [
                EdgeId3::new(x, y, z, Axis3::X),
                EdgeId3::new(x, y, z + 1, Axis3::X),
                EdgeId3::new(x, y, z, Axis3::Z),
                EdgeId3::new(x + 1, y, z, Axis3::Z),
            ],
            Plane3::Yz => [
                EdgeId3::new(x, y, z, Axis3::Y),
                EdgeId3::new(x, y, z + 1, Axis3::Y),
                EdgeId3::new(x, y, z, Axis3::Z),
                EdgeId3::new(x, y + 1, z, Axis3::Z),
            ],
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(self.plane, Plane3::Xz | Plane3::Yz)
    }
}

/// Face weight by boundary-spin parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceWeight {
    pub even: Complex64,
    pub odd: Complex64,
}

impl FaceWeight {
    /// Plain coupling: weight `e^{βJ}` on even parity, 1 on odd.
    pub fn coupling(e_beta_j: Complex64) -> Self {
        FaceWeight { even: e_beta_j, odd: C_ONE }
    }

    /// Physical coupling at inverse temperature `beta`.
    pub fn coupling_physical(beta: f64, j: f64) -> Self {
        Self::coupling(crate::linalg::cr((beta * j).exp()))
    }

    /// Energy-shifted identity face: weight 1 on even parity, `ζ` on odd.
    pub fn shifted_identity(zeta: Complex64) -> Self {
        FaceWeight { even: C_ONE, odd: zeta }
    }

    pub fn inert() -> Self {
        FaceWeight { even: C_ONE, odd: C_ONE }
    }

    pub fn is_inert(&self) -> bool {
        self.even == C_ONE && self.odd == C_ONE
    }

    pub fn apply(&self, parity: u8) -> Complex64 {
        if parity & 1 == 0 {
            self.even
        } else {
            self.odd
        }
    }
}

type Vertex3 = (usize, usize, usize);

/// One offending cycle of gauge-fixed edges.
#[derive(Debug, Clone)]
pub struct GaugeLoopError {
    pub cycle: Vec<EdgeId3>,
}

impl std::fmt::Display for GaugeLoopError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "gauge-fixed edges form a closed loop of length {}", self.cycle.len())
    }
}

impl std::error::Error for GaugeLoopError {}

#[derive(Debug, Clone)]
pub struct LgtModel {
    pub extents: (usize, usize, usize),
    pub faces: BTreeMap<FaceId3, FaceWeight>,
    pub gauge_fixed: BTreeMap<EdgeId3, u8>,
    pub clamped: BTreeMap<EdgeId3, u8>,
    pub boundary: BoundaryCondition,
}

impl LgtModel {
    /// All faces inert, nothing fixed, open boundary.
    pub fn new(extents: (usize, usize, usize)) -> Self {
        LgtModel {
            extents,
            faces: BTreeMap::new(),
            gauge_fixed: BTreeMap::new(),
            clamped: BTreeMap::new(),
            boundary: BoundaryCondition::Open,
        }
    }

    pub fn edge_in_range(&self, e: &EdgeId3) -> bool {
        let (ex, ey, ez) = self.extents;
        match e.dir {
            Axis3::X => e.x < ex && e.y <= ey && e.z <= ez,
            Axis3::Y => e.x <= ex && e.y < ey && e.z <= ez,
            Axis3::Z => e.x <= ex && e.y <= ey && e.z < ez,
        }
    }

    pub fn face_in_range(&self, f: &FaceId3) -> bool {
        let (ex, ey, ez) = self.extents;
        match f.plane {
            Plane3::Xy => f.x < ex && f.y < ey && f.z <= ez,
            Plane3::Xz => f.x < ex && f.y <= ey && f.z < ez,
            Plane3::Yz => f.x <= ex && f.y < ey && f.z < ez,
        }
    }

    pub fn set_face(&mut self, f: FaceId3, w: FaceWeight) -> Result<(), SpinlatError> {
        if !self.face_in_range(&f) {
            return Err(SpinlatError::MalformedGeometry(format!("face {f:?} outside lattice")));
        }
        self.faces.insert(f, w);
        Ok(())
    }

    pub fn gauge_fix(&mut self, e: EdgeId3, v: u8) -> Result<(), SpinlatError> {
        self.check_fixable(&e, v)?;
        self.gauge_fixed.insert(e, v);
        Ok(())
    }

    pub fn clamp(&mut self, e: EdgeId3, v: u8) -> Result<(), SpinlatError> {
        self.check_fixable(&e, v)?;
        self.clamped.insert(e, v);
        Ok(())
    }

    fn check_fixable(&self, e: &EdgeId3, v: u8) -> Result<(), SpinlatError> {
        if !self.edge_in_range(e) {
            return Err(SpinlatError::MalformedGeometry(format!("edge {e:?} outside lattice")));
        }
        if v > 1 {
            return Err(SpinlatError::InvalidConfig(format!("spin value {v} >= 2")));
        }
        if self.gauge_fixed.contains_key(e) || self.clamped.contains_key(e) {
            return Err(SpinlatError::InvalidConfig(format!("edge {e:?} fixed twice")));
        }
        Ok(())
    }

    /// Fix every time-direction edge to 0 (the temporal gauge).
    pub fn temporal_gauge(&mut self) -> Result<(), SpinlatError> {
        let (ex, ey, ez) = self.extents;
        for x in 0..=ex {
            for y in 0..=ey {
                for z in 0..ez {
                    self.gauge_fix(EdgeId3::new(x, y, z, Axis3::Z), 0)?;
                }
            }
        }
        Ok(())
    }

    /// Every edge of the lattice, in the canonical (z, direction, x, y) order
    /// used for free-spin enumeration.
    pub fn all_edges(&self) -> Vec<EdgeId3> {
        let (ex, ey, ez) = self.extents;
        let mut out = Vec::new();
        for z in 0..=ez {
            for (dir, xr, yr) in [(Axis3::X, ex, ey + 1), (Axis3::Y, ex + 1, ey)] {
                for x in 0..xr {
                    for y in 0..yr {
                        out.push(EdgeId3::new(x, y, z, dir));
                    }
                }
            }
        }
        for z in 0..ez {
            for x in 0..=ex {
                for y in 0..=ey {
                    out.push(EdgeId3::new(x, y, z, Axis3::Z));
                }
            }
        }
        out
    }

    /// Spatial edge positions of one time slice, in canonical order
    /// (x-edges by (x,y), then y-edges by (x,y)).
    pub fn spatial_positions(&self) -> Vec<(Axis3, usize, usize)> {
        let (ex, ey, _) = self.extents;
        let mut out = Vec::new();
        for x in 0..ex {
            for y in 0..=ey {
                out.push((Axis3::X, x, y));
            }
        }
        for x in 0..=ex {
            for y in 0..ey {
                out.push((Axis3::Y, x, y));
            }
        }
        out
    }

    /// Number of spatial edges per slice (the fixed-boundary config length).
    pub fn boundary_size(&self) -> usize {
        self.spatial_positions().len()
    }

    /// Edges incident to a lattice vertex (the gauge-transformation support).
    pub fn incident_edges(&self, v: (usize, usize, usize)) -> Vec<EdgeId3> {
        let (x, y, z) = v;
        let mut out = Vec::new();
        let mut push = |e: EdgeId3| {
            if self.edge_in_range(&e) {
                out.push(e);
            }
        };
        push(EdgeId3::new(x, y, z, Axis3::X));
        push(EdgeId3::new(x, y, z, Axis3::Y));
        push(EdgeId3::new(x, y, z, Axis3::Z));
        if x > 0 {
            push(EdgeId3::new(x - 1, y, z, Axis3::X));
        }
        if y > 0 {
            push(EdgeId3::new(x, y - 1, z, Axis3::Y));
        }
        if z > 0 {
            push(EdgeId3::new(x, y, z - 1, Axis3::Z));
        }
        out
    }

    fn vertex_id(&self, v: (usize, usize, usize), periodic: bool) -> (usize, usize, usize) {
        let (_, _, ez) = self.extents;
        if periodic && v.2 == ez && ez > 0 {
            (v.0, v.1, 0)
        } else {
            v
        }
    }

    /// Check that the gauge-fixed edge subgraph is acyclic; on failure the
    /// error carries one offending cycle.
    pub fn validate_gauge_fixing(&self) -> Result<(), GaugeLoopError> {
        let periodic = matches!(self.boundary, BoundaryCondition::Periodic);
        let mut adj: BTreeMap<Vertex3, Vec<(usize, Vertex3)>> = BTreeMap::new();
        let edges: Vec<&EdgeId3> = self.gauge_fixed.keys().collect();
        for (i, e) in edges.iter().enumerate() {
            let (a, b) = e.endpoints();
            let a = self.vertex_id(a, periodic);
            let b = self.vertex_id(b, periodic);
            adj.entry(a).or_default().push((i, b));
            adj.entry(b).or_default().push((i, a));
        }
        // Iterative DFS with parent-edge tracking; a visited neighbor reached
        // by a new edge closes a cycle.
        let mut visited: BTreeMap<Vertex3, Option<usize>> = BTreeMap::new();
        let mut parent: BTreeMap<Vertex3, (usize, Vertex3)> = BTreeMap::new();
        for start in adj.keys().copied().collect::<Vec<_>>() {
            if visited.contains_key(&start) {
                continue;
            }
            let mut stack = vec![(start, usize::MAX)];
            visited.insert(start, None);
            while let Some((v, via)) = stack.pop() {
                for &(eid, w) in adj.get(&v).into_iter().flatten() {
                    if eid == via {
                        continue;
                    }
                    if let std::collections::btree_map::Entry::Vacant(entry) = visited.entry(w) {
                        entry.insert(Some(eid));
                        parent.insert(w, (eid, v));
                        stack.push((w, eid));
                    } else {
                        // Reconstruct the cycle: walk both endpoints back to
                        // their common ancestor through parent links.
                        let mut cycle = vec![*edges[eid]];
                        let mut path_v: Vec<Vertex3> = vec![v];
                        let mut cur = v;
                        while let Some(&(_, p)) = parent.get(&cur) {
                            path_v.push(p);
                            cur = p;
                        }
                        let mut cur = w;
                        let mut w_edges = Vec::new();
                        while !path_v.contains(&cur) {
                            let &(pe, p) = parent.get(&cur).expect("rooted");
                            w_edges.push(*edges[pe]);
                            cur = p;
                        }
                        let meet = cur;
                        let mut cur = v;
                        while cur != meet {
                            let &(pe, p) = parent.get(&cur).expect("rooted");
                            cycle.push(*edges[pe]);
                            cur = p;
                        }
                        cycle.extend(w_edges);
                        return Err(GaugeLoopError { cycle });
                    }
                }
            }
        }
        Ok(())
    }

    /// Resolve the pinned value of an edge, if any, folding in boundary
    /// configurations and the periodic time identification.
    fn pinned_value(
        &self,
        e: &EdgeId3,
        left: Option<&[u8]>,
        right: Option<&[u8]>,
        positions: &BTreeMap<(Axis3, usize, usize), usize>,
    ) -> Option<u8> {
        if let Some(&v) = self.gauge_fixed.get(e) {
            return Some(v);
        }
        if let Some(&v) = self.clamped.get(e) {
            return Some(v);
        }
        if e.dir != Axis3::Z {
            let idx = positions.get(&(e.dir, e.x, e.y)).copied();
            if let Some(idx) = idx {
                if e.z == 0 {
                    if let Some(r) = right {
                        return Some(r[idx]);
                    }
                }
                if e.z == self.extents.2 {
                    if let Some(l) = left {
                        return Some(l[idx]);
                    }
                }
            }
        }
        None
    }

    /// Flatten into the shared enumeration plan. Free spins are the edges in
    /// canonical (z, direction, x, y) order; under periodic time the last
    /// slice's spatial edges alias the first slice's.
    pub fn oracle_plan(&self) -> Result<OraclePlan, SpinlatError> {
        let (left, right) = match &self.boundary {
            BoundaryCondition::Fixed { left, right } => {
                let n = self.boundary_size();
                if left.len() != n || right.len() != n {
                    return Err(SpinlatError::InvalidConfig(format!(
                        "boundary configs must have length {n}"
                    )));
                }
                if left.iter().chain(right.iter()).any(|&v| v > 1) {
                    return Err(SpinlatError::InvalidConfig("boundary spin value >= 2".into()));
                }
                (Some(left.as_slice()), Some(right.as_slice()))
            }
            _ => (None, None),
        };
        let periodic = matches!(self.boundary, BoundaryCondition::Periodic);
        let positions: BTreeMap<(Axis3, usize, usize), usize> = self
            .spatial_positions()
            .into_iter()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let ez = self.extents.2;

        let mut slot_of: BTreeMap<EdgeId3, Slot> = BTreeMap::new();
        let mut free = 0usize;
        for e in self.all_edges() {
            if let Some(v) = self.pinned_value(&e, left, right, &positions) {
                slot_of.insert(e, Slot::Pinned(v));
                continue;
            }
            if periodic && e.dir != Axis3::Z && e.z == ez && ez > 0 {
                let alias = EdgeId3::new(e.x, e.y, 0, e.dir);
                let s = *slot_of.get(&alias).ok_or_else(|| {
                    SpinlatError::MalformedGeometry("alias target missing".into())
                })?;
                slot_of.insert(e, s);
                continue;
            }
            slot_of.insert(e, Slot::Free(free));
            free += 1;
        }

        let mut terms = Vec::new();
        for (f, w) in &self.faces {
            if !self.face_in_range(f) {
                return Err(SpinlatError::MalformedGeometry(format!("face {f:?} outside lattice")));
            }
            if w.is_inert() {
                continue;
            }
            let mut base = 0u8;
            let mut slots = Vec::new();
            for e in f.edges() {
                match slot_of[&e] {
                    Slot::Pinned(v) => base ^= v & 1,
                    s => slots.push(s),
                }
            }
            if slots.is_empty() {
                terms.push(Term::Const(w.apply(base)));
            } else {
                terms.push(Term::Parity { slots, base, even: w.even, odd: w.odd });
            }
        }
        Ok(OraclePlan { q: 2, free, terms, contradictory: false })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, C_I};
    use crate::spinlat::EnumLimits;

    #[test]
    fn single_face_parity_counts() {
        // One spatial face with e^{βJ}=i, all four spins free:
        // 8 even-parity configs weigh i, 8 odd weigh 1.
        let mut m = LgtModel::new((1, 1, 0));
        m.set_face(FaceId3::new(0, 0, 0, Plane3::Xy), FaceWeight::coupling(C_I)).unwrap();
        let plan = m.oracle_plan().unwrap();
        assert_eq!(plan.free, 4);
        let mut even = 0;
        let mut odd = 0;
        for (_, w) in plan.configs(&EnumLimits::default()).unwrap() {
            if (w - C_I).norm() < 1e-15 {
                even += 1;
            } else if (w - C_ONE).norm() < 1e-15 {
                odd += 1;
            } else {
                panic!("unexpected weight {w}");
            }
        }
        assert_eq!((even, odd), (8, 8));
    }

    #[test]
    fn inert_face_contributes_nothing() {
        let mut m = LgtModel::new((1, 1, 0));
        m.set_face(FaceId3::new(0, 0, 0, Plane3::Xy), FaceWeight::inert()).unwrap();
        let plan = m.oracle_plan().unwrap();
        let z = plan.brute_force(&EnumLimits::default()).unwrap().z;
        assert!((z - cr(16.0)).norm() < 1e-12);
    }

    #[test]
    fn plaquette_of_fixed_edges_is_a_loop() {
        let mut m = LgtModel::new((2, 2, 2));
        let f = FaceId3::new(0, 0, 0, Plane3::Xy);
        for e in f.edges() {
            m.gauge_fix(e, 0).unwrap();
        }
        let err = m.validate_gauge_fixing().unwrap_err();
        assert_eq!(err.cycle.len(), 4);
    }

    #[test]
    fn temporal_gauge_is_acyclic() {
        let mut m = LgtModel::new((2, 2, 2));
        m.temporal_gauge().unwrap();
        assert!(m.validate_gauge_fixing().is_ok());
    }

    #[test]
    fn temporal_gauge_loops_under_periodic_time() {
        let mut m = LgtModel::new((1, 1, 2));
        m.temporal_gauge().unwrap();
        m.boundary = BoundaryCondition::Periodic;
        assert!(m.validate_gauge_fixing().is_err());
    }

    #[test]
    fn gauge_invariance_of_config_weights() {
        // Flipping all edges at a vertex flips two boundary spins of every
        // incident face, leaving each face parity (hence each weight) alone.
        let mut m = LgtModel::new((1, 1, 1));
        m.set_face(FaceId3::new(0, 0, 0, Plane3::Xy), FaceWeight::coupling(C_I)).unwrap();
        m.set_face(FaceId3::new(0, 0, 0, Plane3::Xz), FaceWeight::coupling(cr(0.5))).unwrap();
        m.set_face(FaceId3::new(0, 0, 1, Plane3::Xy), FaceWeight::coupling(cr(2.0))).unwrap();
        let plan = m.oracle_plan().unwrap();
        let edges = m.all_edges();
        let vertex = (1usize, 1usize, 0usize);
        let flips: Vec<usize> = m
            .incident_edges(vertex)
            .iter()
            .map(|e| edges.iter().position(|x| x == e).unwrap())
            .collect();
        for (config, w) in plan.clone().configs(&EnumLimits::default()).unwrap().take(512) {
            let mut flipped = config.clone();
            for &i in &flips {
                flipped[i] ^= 1;
            }
            let wf = plan.weight(&flipped);
            assert!((w - wf).norm() < 1e-13);
        }
    }

    #[test]
    fn shifted_identity_face_weights() {
        let w = FaceWeight::shifted_identity(cr(1e-3));
        assert_eq!(w.apply(0), C_ONE);
        assert_eq!(w.apply(1), cr(1e-3));
    }
}
