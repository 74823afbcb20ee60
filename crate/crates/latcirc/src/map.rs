//! Forward mappings: build a circuit from each lattice-model family so that
//! the partition function is recovered as `κ·⟨L|C|R⟩` for fixed boundaries,
//! `κ·⟨+|^⊗n C |+⟩^⊗n` with `κ ⊇ q^n` for open boundaries, and `κ·Tr C` for
//! periodic ones.
//!
//! Gate-order convention: models are processed column by column from the
//! right edge, with the right boundary as circuit input. Construction
//! normalizes this to plain first-to-last gate order, keeping the left/right
//! state roles: the first gates pushed are the ones adjacent to the right
//! boundary.

use crate::linalg::{C_ONE, C_ZERO};
use crate::qcirc::{self, Circuit, ProductState, QcircError};
use crate::spinlat::{
    Axis3, BoundaryCondition, EdgeId3, EdgeModel, FaceId3, FaceWeight, GaugeLoopError, LatticeModel,
    LgtModel, PartitionValue, Plane3, Provenance, SpinlatError, VertexModel,
};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("malformed geometry: {0}")]
    MalformedGeometry(String),
    #[error("unsupported face: {0}")]
    UnsupportedFace(String),
    #[error(transparent)]
    GaugeLoop(#[from] GaugeLoopError),
    #[error(transparent)]
    Qcirc(#[from] QcircError),
    #[error(transparent)]
    Spinlat(#[from] SpinlatError),
}

pub type Result<T> = std::result::Result<T, MapError>;

/// Normalization tracked symbolically: `2^{pow2_halves/2} · q^{powq_halves/2}
/// · residual`, so the `2^{τ/2+n}`-type factors never touch floating point
/// until evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kappa {
    pub q: usize,
    pub pow2_halves: i64,
    pub powq_halves: i64,
    pub residual: Complex64,
}

impl Kappa {
    pub fn one(q: usize) -> Self {
        Kappa { q, pow2_halves: 0, powq_halves: 0, residual: C_ONE }
    }

    pub fn times_pow2_halves(mut self, halves: i64) -> Self {
        self.pow2_halves += halves;
        self
    }

    pub fn times_powq_halves(mut self, halves: i64) -> Self {
        self.powq_halves += halves;
        self
    }

    pub fn times(mut self, c: Complex64) -> Self {
        self.residual *= c;
        self
    }

    pub fn value(&self) -> Complex64 {
        let two = 2f64.powf(self.pow2_halves as f64 / 2.0);
        let qf = (self.q as f64).powf(self.powq_halves as f64 / 2.0);
        self.residual * two * qf
    }

    pub fn inverse_value(&self) -> Complex64 {
        C_ONE / self.value()
    }
}

/// Boundary descriptor of one circuit wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireState {
    Basis(u8),
    /// The normalized uniform superposition over the q levels.
    Plus,
}

pub fn product_state(q: usize, states: &[WireState]) -> ProductState {
    let plus = ProductState::plus(q, 1).factors[0].clone();
    let factors = states
        .iter()
        .map(|s| match s {
            WireState::Basis(v) => {
                let mut f = vec![C_ZERO; q];
                f[*v as usize] = C_ONE;
                f
            }
            WireState::Plus => plus.clone(),
        })
        .collect();
    ProductState { q, factors }
}

/// Evaluation mode of a mapped circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Fixed,
    Open,
    Periodic,
}

/// A circuit together with the boundary states and normalization needed to
/// evaluate the partition function it encodes.
#[derive(Debug, Clone)]
pub struct MappedCircuit {
    pub circuit: Circuit,
    pub kappa: Kappa,
    pub mode: EvalMode,
    pub left: Option<Vec<WireState>>,
    pub right: Option<Vec<WireState>>,
}

impl MappedCircuit {
    /// `κ·⟨L|C|R⟩` (or `κ·Tr C` in periodic mode).
    pub fn evaluate(&self) -> Result<Complex64> {
        self.evaluate_with_trace_cap(qcirc::DEFAULT_TRACE_CAP)
    }

    pub fn evaluate_with_trace_cap(&self, cap: usize) -> Result<Complex64> {
        let raw = match self.mode {
            EvalMode::Periodic => qcirc::trace_with_cap(&self.circuit, cap)?,
            _ => {
                let left = product_state(
                    self.circuit.q,
                    self.left.as_ref().expect("non-periodic mapped circuit has left state"),
                );
                let right = product_state(
                    self.circuit.q,
                    self.right.as_ref().expect("non-periodic mapped circuit has right state"),
                );
                qcirc::matrix_element(&self.circuit, &left, &right)?
            }
        };
        Ok(raw * self.kappa.value())
    }

    /// Evaluate and package as a circuit-provenance partition value.
    pub fn partition_value(&self) -> Result<PartitionValue> {
        Ok(PartitionValue {
            z: self.evaluate()?,
            kappa: self.kappa.value(),
            provenance: Provenance::Circuit,
        })
    }
}

fn boundary_wire_states(
    boundary: &BoundaryCondition,
    wires: usize,
) -> (EvalMode, Option<Vec<WireState>>, Option<Vec<WireState>>, i64) {
    match boundary {
        BoundaryCondition::Fixed { left, right } => (
            EvalMode::Fixed,
            Some(left.iter().map(|&v| WireState::Basis(v)).collect()),
            Some(right.iter().map(|&v| WireState::Basis(v)).collect()),
            0,
        ),
        BoundaryCondition::Open => (
            EvalMode::Open,
            Some(vec![WireState::Plus; wires]),
            Some(vec![WireState::Plus; wires]),
            // Σ_s |s⟩ = √q |+⟩ on each wire, each side.
            2 * wires as i64,
        ),
        BoundaryCondition::Periodic => (EvalMode::Periodic, None, None, 0),
    }
}

/// Map a vertex model to its circuit: one two-qudit gate per vertex, columns
/// pushed right to left.
pub fn vertex_to_circuit(model: &VertexModel) -> Result<MappedCircuit> {
    let wires = model.wires();
    let mut circuit = Circuit::new(wires, model.q);
    for c in (0..model.cols).rev() {
        for (g, tensor) in model.weights[c].iter().enumerate() {
            let top = model.gate_top_wire(c, g);
            circuit.push(
                tensor.as_gate_matrix(),
                &[top, top + 1],
                format!("W^a@col{c},slot{g}"),
            )?;
        }
    }
    let (mode, left, right, powq_halves) = boundary_wire_states(&model.boundary, wires);
    let kappa = Kappa::one(model.q).times_powq_halves(powq_halves);
    Ok(MappedCircuit { circuit, kappa, mode, left, right })
}

/// Map an edge model on a planar circuit graph to its circuit: horizontal
/// edges become single-qudit gates, vertical edges diagonal two-qudit gates,
/// site fields diagonal single-qudit gates.
pub fn edge_to_circuit(model: &EdgeModel) -> Result<MappedCircuit> {
    let graph = &model.graph;
    let n = graph.n();
    let q = model.q;
    let mut circuit = Circuit::new(n, q);

    // Index diagonal items by the column they attach to.
    let mut fields_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (vid, v) in graph.vertices().iter().enumerate() {
        fields_at.entry(v.col_end).or_default().push(vid);
    }
    let mut vedges_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in graph.vertical_edges().iter().enumerate() {
        vedges_at.entry(e.col).or_default().push(i);
    }
    let mut hedges_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in graph.horizontal_edges().iter().enumerate() {
        hedges_at.entry(e.col).or_default().push(i);
    }

    for c in (0..graph.m()).rev() {
        for &vid in fields_at.get(&c).into_iter().flatten() {
            let table = &model.vertex_weights[vid];
            if table.is_identity(0.0) {
                continue;
            }
            let row = graph.vertices()[vid].row;
            circuit.push(
                crate::linalg::diag(table.entries()),
                &[row],
                format!("W_i@v({row},{c})"),
            )?;
        }
        for &ei in vedges_at.get(&c).into_iter().flatten() {
            let e = &graph.vertical_edges()[ei];
            let table = &model.vertical_weights[ei];
            let mut entries = vec![C_ZERO; q * q];
            for a in 0..q as u8 {
                for b in 0..q as u8 {
                    entries[a as usize * q + b as usize] = table.get(a, b);
                }
            }
            circuit.push(
                crate::linalg::diag(&entries),
                &[e.row, e.row + 1],
                format!("W_e^v@({},{})", e.row, e.col),
            )?;
        }
        // Horizontal edges crossing from column c to c-1 are applied after
        // column c's diagonal layer.
        if c > 0 {
            for &ei in hedges_at.get(&(c - 1)).into_iter().flatten() {
                let e = &graph.horizontal_edges()[ei];
                let table = &model.horizontal_weights[ei];
                let mut m = ndarray::Array2::from_elem((q, q), C_ZERO);
                for l in 0..q as u8 {
                    for r in 0..q as u8 {
                        // Output index = left vertex state, input = right.
                        m[(l as usize, r as usize)] = table.get(l, r);
                    }
                }
                circuit.push(m, &[e.row], format!("W_e^h@({},{})", e.row, e.col))?;
            }
        }
    }

    let (mode, left, right, powq_halves) = boundary_wire_states(&model.boundary, n);
    let kappa = Kappa::one(q).times_powq_halves(powq_halves);
    Ok(MappedCircuit { circuit, kappa, mode, left, right })
}

/// Partition function of a periodic edge model as a circuit trace:
/// `Z' = Σ_s Z^s = Tr C`.
pub fn periodic_ising_trace(model: &EdgeModel) -> Result<PartitionValue> {
    if !matches!(model.boundary, BoundaryCondition::Periodic) {
        return Err(MapError::MalformedGeometry(
            "periodic_ising_trace needs a periodic boundary".into(),
        ));
    }
    edge_to_circuit(model)?.partition_value()
}

/// Status of one spatial edge position at one time slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SliceStatus {
    Pinned(u8),
    Free,
}

/// Map a Z2 LGT (time axis z) to its circuit. Temporal faces become
/// single-qubit gates between slices, spatial faces diagonal gates within a
/// slice; faces with every spin pinned fold into the scalar prefactor. A
/// temporal face with a non-inert coupling whose z-edges are not gauge-fixed
/// is rejected; free z-edges surrounded by inert faces only contribute a
/// factor 2 each, absorbed into κ.
pub fn lgt_to_circuit(model: &LgtModel) -> Result<MappedCircuit> {
    model.validate_gauge_fixing()?;
    let (ex, ey, ez) = model.extents;
    let periodic = matches!(model.boundary, BoundaryCondition::Periodic);
    let positions = model.spatial_positions();
    let pos_index: BTreeMap<(Axis3, usize, usize), usize> =
        positions.iter().copied().enumerate().map(|(i, p)| (p, i)).collect();

    // Pinned values from gauge fixing, clamps and boundary configs.
    let mut pinned: BTreeMap<EdgeId3, u8> = BTreeMap::new();
    for (e, &v) in model.gauge_fixed.iter().chain(model.clamped.iter()) {
        if !model.edge_in_range(e) {
            return Err(MapError::MalformedGeometry(format!("edge {e:?} outside lattice")));
        }
        pinned.insert(*e, v);
    }
    if let BoundaryCondition::Fixed { left, right } = &model.boundary {
        let nb = model.boundary_size();
        if left.len() != nb || right.len() != nb {
            return Err(MapError::MalformedGeometry(format!(
                "boundary configs must have length {nb}"
            )));
        }
        for (i, &(dir, x, y)) in positions.iter().enumerate() {
            pinned.entry(EdgeId3::new(x, y, 0, dir)).or_insert(right[i]);
            pinned.entry(EdgeId3::new(x, y, ez, dir)).or_insert(left[i]);
        }
    }
    let status = |dir: Axis3, x: usize, y: usize, t: usize| -> SliceStatus {
        let t = if periodic && t == ez { 0 } else { t };
        match pinned.get(&EdgeId3::new(x, y, t, dir)) {
            Some(&v) => SliceStatus::Pinned(v),
            None => SliceStatus::Free,
        }
    };

    // Free z-edges are legal only if every face touching them is inert; each
    // contributes a factor 2 to Z.
    let mut free_z = 0i64;
    for x in 0..=ex {
        for y in 0..=ey {
            for z in 0..ez {
                let e = EdgeId3::new(x, y, z, Axis3::Z);
                if pinned.contains_key(&e) {
                    continue;
                }
                let mut candidate_faces = Vec::new();
                if x > 0 {
                    candidate_faces.push(FaceId3::new(x - 1, y, z, Plane3::Xz));
                }
                candidate_faces.push(FaceId3::new(x, y, z, Plane3::Xz));
                if y > 0 {
                    candidate_faces.push(FaceId3::new(x, y - 1, z, Plane3::Yz));
                }
                candidate_faces.push(FaceId3::new(x, y, z, Plane3::Yz));
                for f in candidate_faces {
                    if model.face_in_range(&f) {
                        if let Some(w) = model.faces.get(&f) {
                            if !w.is_inert() {
                                return Err(MapError::UnsupportedFace(format!(
                                    "face {f:?} has a non-trivial coupling but its time edge {e:?} is not fixed"
                                )));
                            }
                        }
                    }
                }
                free_z += 1;
            }
        }
    }

    // Wires: spatial positions with at least one free slice instance.
    let slice_range: Vec<usize> = if periodic { (0..ez).collect() } else { (0..=ez).collect() };
    let mut wire_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &(dir, x, y)) in positions.iter().enumerate() {
        if slice_range.iter().any(|&t| status(dir, x, y, t) == SliceStatus::Free) {
            let w = wire_of.len();
            wire_of.insert(i, w);
        }
    }
    let wires = wire_of.len();
    if periodic {
        for (i, &(dir, x, y)) in positions.iter().enumerate() {
            if wire_of.contains_key(&i) && status(dir, x, y, 0) != SliceStatus::Free {
                return Err(MapError::UnsupportedFace(format!(
                    "periodic time requires position {:?} free at the seam",
                    (dir, x, y)
                )));
            }
        }
    }

    let q = 2usize;
    let mut circuit = Circuit::new(wires, q);
    let mut prefactor = C_ONE;

    let face_weight =
        |f: &FaceId3| -> FaceWeight { model.faces.get(f).copied().unwrap_or_else(FaceWeight::inert) };

    let last_t = *slice_range.last().unwrap_or(&0);
    for &t in &slice_range {
        // Spatial faces of slice t. Under periodic time the seam slice ez
        // aliases slice 0, so its faces are processed with slice 0.
        let mut face_slices = vec![t];
        if periodic && t == 0 && ez > 0 {
            face_slices.push(ez);
        }
        for fx in 0..ex {
            for fy in 0..ey {
                let mut combined: Option<FaceWeight> = None;
                for &fz in &face_slices {
                    let w = face_weight(&FaceId3::new(fx, fy, fz, Plane3::Xy));
                    combined = Some(match combined {
                        None => w,
                        Some(prev) => FaceWeight {
                            even: prev.even * w.even,
                            odd: prev.odd * w.odd,
                        },
                    });
                }
                let f = FaceId3::new(fx, fy, t, Plane3::Xy);
                let w = combined.unwrap_or_else(FaceWeight::inert);
                if w.is_inert() {
                    continue;
                }
                let mut base = 0u8;
                let mut targets = Vec::new();
                for e in f.edges() {
                    match status(e.dir, e.x, e.y, t) {
                        SliceStatus::Pinned(v) => base ^= v & 1,
                        SliceStatus::Free => {
                            let pi = pos_index[&(e.dir, e.x, e.y)];
                            targets.push(wire_of[&pi]);
                        }
                    }
                }
                if targets.is_empty() {
                    prefactor *= w.apply(base);
                    continue;
                }
                targets.sort_unstable();
                let dim = q.pow(targets.len() as u32);
                let entries: Vec<Complex64> = (0..dim)
                    .map(|idx| w.apply(base ^ (idx.count_ones() as u8 & 1)))
                    .collect();
                circuit.push(
                    crate::linalg::diag(&entries),
                    &targets,
                    format!("W_f^s@({fx},{fy},{t})"),
                )?;
            }
        }
        // Transition t → t+1 (wrapping to slice 0 for periodic time).
        if t == last_t && !periodic {
            continue;
        }
        let t1 = t + 1;
        for (i, &(dir, x, y)) in positions.iter().enumerate() {
            let f = match dir {
                Axis3::X => FaceId3::new(x, y, t, Plane3::Xz),
                Axis3::Y => FaceId3::new(x, y, t, Plane3::Yz),
                Axis3::Z => unreachable!("spatial positions never point along z"),
            };
            let w = face_weight(&f);
            // Parity contribution of the two z-direction edges (free z-edges
            // only occur on inert faces, where the parity is irrelevant).
            let (za, zb) = match dir {
                Axis3::X => (EdgeId3::new(x, y, t, Axis3::Z), EdgeId3::new(x + 1, y, t, Axis3::Z)),
                Axis3::Y => (EdgeId3::new(x, y, t, Axis3::Z), EdgeId3::new(x, y + 1, t, Axis3::Z)),
                Axis3::Z => unreachable!(),
            };
            let p = pinned.get(&za).copied().unwrap_or(0) ^ pinned.get(&zb).copied().unwrap_or(0);
            let s0 = status(dir, x, y, t);
            let s1 = status(dir, x, y, t1);
            match (s0, s1) {
                (SliceStatus::Pinned(u), SliceStatus::Pinned(v)) => {
                    // A wired position must track its pinned value so the
                    // final boundary projection sees the right basis state.
                    if let Some(&wire) = wire_of.get(&i) {
                        let mut m = ndarray::Array2::from_elem((2, 2), C_ZERO);
                        m[(v as usize, u as usize)] = w.apply(u ^ v ^ p);
                        circuit.push(m, &[wire], format!("W_f^t@({x},{y},{t})->repin"))?;
                    } else {
                        prefactor *= w.apply(u ^ v ^ p);
                    }
                }
                (_, SliceStatus::Pinned(v)) => {
                    let wire = wire_of[&i];
                    let mut m = ndarray::Array2::from_elem((2, 2), C_ZERO);
                    for a in 0..2u8 {
                        m[(v as usize, a as usize)] = w.apply(a ^ v ^ p);
                    }
                    circuit.push(m, &[wire], format!("W_f^t@({x},{y},{t})->pin"))?;
                }
                (_, SliceStatus::Free) => {
                    let wire = wire_of[&i];
                    let mut m = ndarray::Array2::from_elem((2, 2), C_ZERO);
                    for a in 0..2u8 {
                        for b in 0..2u8 {
                            m[(b as usize, a as usize)] = w.apply(a ^ b ^ p);
                        }
                    }
                    circuit.push(m, &[wire], format!("W_f^t@({x},{y},{t})"))?;
                }
            }
        }
    }
    circuit.scalar_prefactor = prefactor;

    let kappa = Kappa::one(q).times_pow2_halves(2 * free_z);
    if periodic {
        return Ok(MappedCircuit { circuit, kappa, mode: EvalMode::Periodic, left: None, right: None });
    }

    // Boundary descriptors from the first/last slice statuses; wires free at
    // an open end read out through |+⟩ with a √q in κ per side.
    let mut kappa = kappa;
    let mut left_states = vec![WireState::Basis(0); wires];
    let mut right_states = vec![WireState::Basis(0); wires];
    for (i, &(dir, x, y)) in positions.iter().enumerate() {
        let Some(&wire) = wire_of.get(&i) else { continue };
        right_states[wire] = match status(dir, x, y, 0) {
            SliceStatus::Pinned(v) => WireState::Basis(v),
            SliceStatus::Free => {
                kappa = kappa.times_powq_halves(1);
                WireState::Plus
            }
        };
        left_states[wire] = match status(dir, x, y, ez) {
            SliceStatus::Pinned(v) => WireState::Basis(v),
            SliceStatus::Free => {
                kappa = kappa.times_powq_halves(1);
                WireState::Plus
            }
        };
    }
    let mode = match model.boundary {
        BoundaryCondition::Fixed { .. } => EvalMode::Fixed,
        BoundaryCondition::Open => EvalMode::Open,
        BoundaryCondition::Periodic => unreachable!(),
    };
    Ok(MappedCircuit { circuit, kappa, mode, left: Some(left_states), right: Some(right_states) })
}

/// Map any model family.
pub fn model_to_circuit(model: &LatticeModel) -> Result<MappedCircuit> {
    match model {
        LatticeModel::Vertex(m) => vertex_to_circuit(m),
        LatticeModel::Edge(m) => edge_to_circuit(m),
        LatticeModel::Lgt(m) => lgt_to_circuit(m),
    }
}
