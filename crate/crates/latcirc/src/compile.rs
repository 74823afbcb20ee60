//! Reverse direction: compile circuits over the models' native gate
//! alphabets into concrete lattice instances with a tracked normalization,
//! so that `Z/κ` equals the source circuit's matrix element.
//!
//! Each compiler accepts only its model's alphabet:
//!
//! * Ising: `T` and nearest-neighbor `T^{⊗2} W_v T^{⊗2}`, wrapped as
//!   `A·U''·A` with `A = [V^{1/2}]^{⊗n}`; the half-power field gates merge
//!   pairwise so every emitted site carries exactly one `V`.
//! * Six-vertex: gates of the ice-rule sparsity pattern, laid out as a
//!   brickwork with staggered fixed boundaries.
//! * Potts: the logical alphabet `{I1, P_{π/8}, H(ε), I2, CZ}` over the
//!   two-qutrit encoding, with auxiliary contacts folded into site tables.
//! * LGT: logical `{R_z(ξ), diag(1,i,i,1), teleported H̃}` over the
//!   four-qubit encoding; persistence between time slices uses exact
//!   `e^{βJ}=0` copy faces whose gauge-fixed time edges carry a checkerboard
//!   value assignment.

use crate::encodings::{self, StepParams};
use crate::linalg::{cis, CMat, C_I, C_ONE, C_ZERO};
use crate::map::{Kappa, MapError, WireState};
use crate::qcirc::{Circuit, QcircError};
use crate::spinlat::{
    Axis3, BoundaryCondition, EdgeId3, EdgeModel, EdgeTable, FaceId3, FaceWeight, LatticeModel,
    LgtModel, Plane3, PlanarCircuitGraph, SiteTable, SpinlatError, VertexModel, VertexTensor,
};
use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("gate violates the six-vertex sparsity pattern: {0}")]
    NotSixVertexForm(String),
    #[error("width exceeded: {0}")]
    WidthExceeded(String),
    #[error("block budget exceeded: {0}")]
    BlockBudget(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Spinlat(#[from] SpinlatError),
    #[error(transparent)]
    Qcirc(#[from] QcircError),
    #[error(transparent)]
    Encodings(#[from] encodings::EncodingsError),
}

pub type Result<T> = std::result::Result<T, CompileError>;

/// What `Z/κ` is supposed to equal.
#[derive(Debug, Clone, PartialEq)]
pub enum CompileTarget {
    /// `Z/κ = ⟨left|C̄|right⟩` of the unitarized source circuit.
    MatrixElement { left: Vec<WireState>, right: Vec<WireState> },
    /// `Z'/(2^n κ) = 2^{−n} Tr(C̄)`.
    NormalizedTrace { n: usize },
}

/// Per-source-gate audit record: which lattice items a gate emitted.
#[derive(Debug, Clone)]
pub struct ProvenanceEntry {
    pub gate_index: usize,
    pub gate: String,
    pub emitted: Vec<String>,
}

/// A compiled lattice instance plus its normalization and target.
#[derive(Debug, Clone)]
pub struct CompiledInstance {
    pub model: LatticeModel,
    pub kappa: Kappa,
    pub target: CompileTarget,
    pub provenance: Vec<ProvenanceEntry>,
}

impl CompiledInstance {
    /// Normalize a raw partition value to the target scale: `z/κ`, with the
    /// extra `2^{-n}` for normalized-trace targets.
    pub fn normalized(&self, z: Complex64) -> Complex64 {
        let base = z / self.kappa.value();
        match &self.target {
            CompileTarget::MatrixElement { .. } => base,
            CompileTarget::NormalizedTrace { n } => base / 2f64.powi(*n as i32),
        }
    }
}

// ---------------------------------------------------------------------------
// Ising
// ---------------------------------------------------------------------------

/// Source alphabet of the Ising reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsingSourceGate {
    /// `T = V^{1/2} W̄_h V^{1/2}` on one wire.
    T { wire: usize },
    /// `T^{⊗2} W_v T^{⊗2}` on wires `(top, top+1)`.
    TTWvTT { top: usize },
}

/// The unitarized source circuit `A·U''·A` as a dense-gate circuit, for
/// reference evaluation of `⟨+|^n ·|+⟩^n`.
pub fn ising_source_circuit(gates: &[IsingSourceGate], n: usize) -> Result<Circuit> {
    let ig = encodings::ising_gate_set();
    let mut c = Circuit::new(n, 2);
    for w in 0..n {
        c.push(ig.v_half.clone(), &[w], "A")?;
    }
    for (i, g) in gates.iter().enumerate() {
        match *g {
            IsingSourceGate::T { wire } => c.push(ig.t.clone(), &[wire], format!("T#{i}"))?,
            IsingSourceGate::TTWvTT { top } => {
                c.push(ig.tt_wv_tt(), &[top, top + 1], format!("TTWvTT#{i}"))?
            }
        }
    }
    for w in 0..n {
        c.push(ig.v_half.clone(), &[w], "A")?;
    }
    Ok(c)
}

struct IsingGlue {
    n: usize,
    next_col: usize,
    // Columns at which a new vertex begins on each wire (τ entries total).
    hedge_cols: Vec<BTreeSet<usize>>,
    vedges: BTreeSet<(usize, usize)>,
    half_v: Vec<u8>,
    emitted: Vec<String>,
}

impl IsingGlue {
    fn new(n: usize) -> Self {
        IsingGlue {
            n,
            next_col: 1,
            hedge_cols: vec![BTreeSet::new(); n],
            vedges: BTreeSet::new(),
            half_v: vec![0; n],
            emitted: Vec::new(),
        }
    }

    fn half_v(&mut self, wire: usize) -> Result<()> {
        self.half_v[wire] += 1;
        if self.half_v[wire] > 2 {
            return Err(CompileError::UnsupportedGate(format!(
                "wire {wire} accumulated a field beyond one V between horizontal gates"
            )));
        }
        Ok(())
    }

    fn w_h_bar(&mut self, wire: usize) -> Result<()> {
        if self.half_v[wire] != 2 {
            return Err(CompileError::UnsupportedGate(format!(
                "wire {wire} closes a vertex with V^{{{}/2}} instead of V",
                self.half_v[wire]
            )));
        }
        let c = self.next_col;
        self.next_col += 1;
        self.hedge_cols[wire].insert(c);
        self.emitted.push(format!("horizontal edge row {wire} cols {}-{}", c - 1, c));
        self.half_v[wire] = 0;
        Ok(())
    }

    fn w_v(&mut self, top: usize) -> Result<()> {
        if top + 1 >= self.n {
            return Err(CompileError::UnsupportedGate(format!(
                "two-qubit gate at wire {top} does not fit width {}",
                self.n
            )));
        }
        let c = self.next_col;
        self.next_col += 1;
        self.vedges.insert((top, c));
        self.emitted.push(format!("vertical edge rows {top}-{} col {c}", top + 1));
        Ok(())
    }

    fn take_emitted(&mut self) -> Vec<String> {
        std::mem::take(&mut self.emitted)
    }
}

/// Compile a `{T, T^{⊗2}W_vT^{⊗2}}` circuit into an Ising model on a planar
/// circuit graph with `e^{βJ_e}=i`, `e^{βh_a}=e^{iπ/4}`, open boundaries and
/// `κ = 2^{τ/2+n}`.
pub fn compile_to_ising(gates: &[IsingSourceGate], n: usize) -> Result<CompiledInstance> {
    if n == 0 {
        return Err(CompileError::UnsupportedGate("need at least one wire".into()));
    }
    let mut glue = IsingGlue::new(n);
    let mut provenance = Vec::new();
    for w in 0..n {
        glue.half_v(w)?;
    }
    provenance.push(ProvenanceEntry {
        gate_index: usize::MAX,
        gate: "A (right boundary)".into(),
        emitted: vec!["V^1/2 on every wire".to_string()],
    });
    for (i, g) in gates.iter().enumerate() {
        match *g {
            IsingSourceGate::T { wire } => {
                if wire >= n {
                    return Err(CompileError::UnsupportedGate(format!("T on wire {wire} >= {n}")));
                }
                glue.half_v(wire)?;
                glue.w_h_bar(wire)?;
                glue.half_v(wire)?;
            }
            IsingSourceGate::TTWvTT { top } => {
                if top + 1 >= n {
                    return Err(CompileError::UnsupportedGate(format!(
                        "TTWvTT at wire {top} >= {}",
                        n - 1
                    )));
                }
                for w in [top, top + 1] {
                    glue.half_v(w)?;
                    glue.w_h_bar(w)?;
                    glue.half_v(w)?;
                }
                glue.w_v(top)?;
                for w in [top, top + 1] {
                    glue.half_v(w)?;
                    glue.w_h_bar(w)?;
                    glue.half_v(w)?;
                }
            }
        }
        provenance.push(ProvenanceEntry {
            gate_index: i,
            gate: format!("{g:?}"),
            emitted: glue.take_emitted(),
        });
    }
    for w in 0..n {
        glue.half_v(w)?;
        if glue.half_v[w] != 2 {
            return Err(CompileError::UnsupportedGate(format!(
                "wire {w} ends with a half-integral field power"
            )));
        }
    }
    provenance.push(ProvenanceEntry {
        gate_index: usize::MAX,
        gate: "A (left boundary)".into(),
        emitted: vec!["V^1/2 on every wire".to_string()],
    });

    let m = glue.next_col;
    let mut contracted = BTreeSet::new();
    for w in 0..n {
        for col in 0..m - 1 {
            if !glue.hedge_cols[w].contains(&(col + 1)) {
                contracted.insert((w, col));
            }
        }
    }
    let mut deleted = BTreeSet::new();
    for w in 0..n.saturating_sub(1) {
        for col in 0..m {
            if !glue.vedges.contains(&(w, col)) {
                deleted.insert((w, col));
            }
        }
    }
    let graph = PlanarCircuitGraph::new(n, m, deleted, contracted).map_err(SpinlatError::from)?;
    let tau = graph.tau() as i64;
    let model = EdgeModel::ising_uniform(
        graph,
        C_I,
        cis(std::f64::consts::FRAC_PI_4),
        BoundaryCondition::Open,
    )?;
    let kappa = Kappa::one(2).times_pow2_halves(tau + 2 * n as i64);
    Ok(CompiledInstance {
        model: LatticeModel::Edge(model),
        kappa,
        target: CompileTarget::MatrixElement {
            left: vec![WireState::Plus; n],
            right: vec![WireState::Plus; n],
        },
        provenance,
    })
}

/// The periodic variant: same graph with left/right boundary rows
/// identified, `κ = 2^{τ/2}`, target `Z'/(2^n κ) = 2^{−n} Tr(C̄)`.
pub fn dqc1_instance(gates: &[IsingSourceGate], n: usize) -> Result<CompiledInstance> {
    let open = compile_to_ising(gates, n)?;
    let LatticeModel::Edge(mut model) = open.model else { unreachable!() };
    model.boundary = BoundaryCondition::Periodic;
    let tau = model.graph.tau() as i64;
    Ok(CompiledInstance {
        model: LatticeModel::Edge(model),
        kappa: Kappa::one(2).times_pow2_halves(tau),
        target: CompileTarget::NormalizedTrace { n },
        provenance: open.provenance,
    })
}

// ---------------------------------------------------------------------------
// Six-vertex
// ---------------------------------------------------------------------------

/// A six-vertex-form two-qubit gate on wires `(top, top+1)`.
#[derive(Debug, Clone)]
pub struct SixVertexSourceGate {
    pub matrix: CMat,
    pub top: usize,
    pub label: String,
}

/// Reference circuit over the source gates.
pub fn six_vertex_source_circuit(gates: &[SixVertexSourceGate], wires: usize) -> Result<Circuit> {
    let mut c = Circuit::new(wires, 2);
    for g in gates {
        c.push(g.matrix.clone(), &[g.top, g.top + 1], g.label.clone())?;
    }
    Ok(c)
}

/// Compile a circuit of six-vertex-form gates into a tilted-grid vertex
/// model with staggered fixed boundaries `L = R = (0101…)` and `κ = 1`.
///
/// Gates are placed into brickwork columns right to left in application
/// order (earliest gates nearest the right boundary); empty slots carry the
/// identity vertex.
pub fn compile_to_six_vertex(gates: &[SixVertexSourceGate], wires: usize) -> Result<CompiledInstance> {
    if wires == 0 || !wires.is_multiple_of(2) {
        return Err(CompileError::UnsupportedGate(format!(
            "six-vertex compilation needs an even wire count, got {wires}"
        )));
    }
    let rows = wires / 2;
    let mut placed: Vec<(usize, usize, VertexTensor)> = Vec::new(); // (right-indexed col, slot, tensor)
    let mut frontier = vec![0usize; wires];
    let mut max_col = 0usize;
    let mut provenance = Vec::new();
    for (i, g) in gates.iter().enumerate() {
        if g.top + 1 >= wires {
            return Err(CompileError::UnsupportedGate(format!(
                "gate {i} at wire {} does not fit width {wires}",
                g.top
            )));
        }
        let tensor = VertexTensor::from_gate_matrix(&g.matrix, 2)?;
        if !tensor.is_six_vertex_form(1e-12) {
            return Err(CompileError::NotSixVertexForm(format!("gate {i} ({})", g.label)));
        }
        // Earliest column whose pair parity matches the wire pair.
        let lo = frontier[g.top].max(frontier[g.top + 1]);
        let mut k = lo;
        if k % 2 != g.top % 2 {
            k += 1;
        }
        frontier[g.top] = k + 1;
        frontier[g.top + 1] = k + 1;
        max_col = max_col.max(k);
        let slot = (g.top - (k % 2)) / 2;
        placed.push((k, slot, tensor));
        provenance.push(ProvenanceEntry {
            gate_index: i,
            gate: g.label.clone(),
            emitted: vec![format!("vertex at right-column {k}, slot {slot}")],
        });
    }
    let cols = if gates.is_empty() { 1 } else { max_col + 1 };
    let mut weights: Vec<Vec<VertexTensor>> = (0..cols)
        .map(|c| {
            let offset = (cols - 1 - c) % 2;
            let count = if offset == 0 { rows } else { rows - 1 };
            vec![VertexTensor::identity(2); count]
        })
        .collect();
    for (k, slot, tensor) in placed {
        let c = cols - 1 - k;
        weights[c][slot] = tensor;
    }
    let staggered: Vec<u8> = (0..wires).map(|w| (w % 2) as u8).collect();
    let model = VertexModel::new(
        rows,
        cols,
        2,
        weights,
        BoundaryCondition::Fixed { left: staggered.clone(), right: staggered.clone() },
    )?;
    Ok(CompiledInstance {
        model: LatticeModel::Vertex(model),
        kappa: Kappa::one(2),
        target: CompileTarget::MatrixElement {
            left: staggered.iter().map(|&v| WireState::Basis(v)).collect(),
            right: staggered.iter().map(|&v| WireState::Basis(v)).collect(),
        },
        provenance,
    })
}

// ---------------------------------------------------------------------------
// Potts
// ---------------------------------------------------------------------------

/// Logical source alphabet of the Potts reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PottsLogicalGate {
    I1 { q: usize },
    P8 { q: usize },
    H { q: usize },
    I2 { q: usize },
    Cz { q: usize },
}

impl PottsLogicalGate {
    fn base(&self) -> usize {
        match *self {
            PottsLogicalGate::I1 { q }
            | PottsLogicalGate::P8 { q }
            | PottsLogicalGate::H { q }
            | PottsLogicalGate::I2 { q }
            | PottsLogicalGate::Cz { q } => q,
        }
    }

    fn span(&self) -> usize {
        match self {
            PottsLogicalGate::I2 { .. } | PottsLogicalGate::Cz { .. } => 2,
            _ => 1,
        }
    }

    fn check(&self, logicals: usize) -> Result<()> {
        if self.base() + self.span() > logicals {
            return Err(CompileError::UnsupportedGate(format!(
                "gate {self:?} outside {logicals} logical qubits"
            )));
        }
        Ok(())
    }

    fn recipe(&self, eps: f64) -> Result<encodings::GateRecipe> {
        Ok(match self {
            PottsLogicalGate::I1 { .. } => encodings::potts_i1(),
            PottsLogicalGate::P8 { .. } => encodings::potts_p8(),
            PottsLogicalGate::H { .. } => encodings::potts_h(eps)?,
            PottsLogicalGate::I2 { .. } => encodings::potts_i2(),
            PottsLogicalGate::Cz { .. } => encodings::potts_cz(),
        })
    }
}

/// Reference circuit: the recipe steps of each logical gate, offset onto the
/// `2·logicals`-qutrit register.
pub fn potts_reference_circuit(
    gates: &[PottsLogicalGate],
    logicals: usize,
    eps: f64,
) -> Result<Circuit> {
    let mut c = Circuit::new(2 * logicals, 3);
    for (i, g) in gates.iter().enumerate() {
        g.check(logicals)?;
        let recipe = g.recipe(eps)?;
        let base = 2 * g.base();
        for s in &recipe.steps {
            let targets: Vec<usize> = s.targets.iter().map(|&t| t + base).collect();
            c.push(s.matrix.clone(), &targets, format!("{}#{i}", s.label))?;
        }
    }
    Ok(c)
}

/// The ideal logical circuit matrix over `2^logicals` dimensions.
pub fn potts_logical_matrix(gates: &[PottsLogicalGate], logicals: usize) -> Result<CMat> {
    let mut u = crate::linalg::eye(1 << logicals);
    for g in gates {
        g.check(logicals)?;
        let m = match *g {
            PottsLogicalGate::I1 { .. } => crate::linalg::eye(2),
            PottsLogicalGate::P8 { .. } => {
                crate::linalg::diag(&[C_ONE, cis(std::f64::consts::PI / 8.0)])
            }
            PottsLogicalGate::H { .. } => encodings::hadamard(),
            PottsLogicalGate::I2 { .. } => crate::linalg::eye(4),
            PottsLogicalGate::Cz { .. } => crate::linalg::diag(&[C_ONE, C_ONE, C_ONE, -C_ONE]),
        };
        u = embed_logical(&m, g.base(), g.span(), logicals).dot(&u);
    }
    Ok(u)
}

fn embed_logical(m: &CMat, base: usize, span: usize, total: usize) -> CMat {
    let left = crate::linalg::eye(1 << base);
    let right = crate::linalg::eye(1 << (total - base - span));
    crate::linalg::kron(&crate::linalg::kron(&left, m), &right)
}

struct PottsRow {
    site_tables: Vec<SiteTable>,
    hedges: Vec<(usize, EdgeTable)>, // (column where the new vertex begins, table)
}

/// Compile a Potts logical circuit into a q=3 edge model on a planar circuit
/// graph: auxiliary-qutrit contacts fold into site tables, time propagation
/// through `(μ,ν)=(1,0)` edges appears as contracted grid columns, and the
/// boundary fixes `|0⟩_L…` on the right and the chosen readout on the left.
pub fn compile_to_potts(
    gates: &[PottsLogicalGate],
    logicals: usize,
    eps: f64,
    readout: &[u8],
    max_free_spins: Option<usize>,
) -> Result<CompiledInstance> {
    if logicals == 0 {
        return Err(CompileError::UnsupportedGate("need at least one logical qubit".into()));
    }
    if readout.len() != logicals || readout.iter().any(|&b| b > 1) {
        return Err(CompileError::UnsupportedGate(
            "readout must give one bit per logical qubit".into(),
        ));
    }
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(CompileError::Encodings(encodings::EncodingsError::BadEpsilon(eps)));
    }
    let rows = 2 * logicals;
    let mut row_state: Vec<PottsRow> = (0..rows)
        .map(|_| PottsRow { site_tables: vec![SiteTable::identity(3)], hedges: Vec::new() })
        .collect();
    let mut vedges: Vec<(usize, usize, EdgeTable)> = Vec::new(); // (top row, column, table)
    let mut next_col = 1usize;
    let mut provenance = Vec::new();

    for (i, g) in gates.iter().enumerate() {
        g.check(logicals)?;
        let recipe = g.recipe(eps)?;
        let base = 2 * g.base();
        let mut emitted = Vec::new();
        let mut gate_hedge_col: Option<usize> = None;
        for s in &recipe.steps {
            let StepParams::PottsMuNu { mu, nu, aux } = s.params else {
                return Err(CompileError::UnsupportedGate("non-Potts step".into()));
            };
            match (s.targets.len(), aux) {
                (1, Some(a)) => {
                    let row = base + s.targets[0];
                    row_state[row]
                        .site_tables
                        .last_mut()
                        .expect("row has a current vertex")
                        .fold_contact(mu, nu, a);
                    emitted.push(format!("aux contact ({mu},{nu}) with |{a}> on row {row}"));
                }
                (1, None) => {
                    // A time-direction edge: the affected rows advance at a
                    // shared fresh column.
                    let col = *gate_hedge_col.get_or_insert_with(|| {
                        let c = next_col;
                        next_col += 1;
                        c
                    });
                    let row = base + s.targets[0];
                    row_state[row].hedges.push((col, EdgeTable::two_valued(3, mu, nu)));
                    row_state[row].site_tables.push(SiteTable::identity(3));
                    emitted.push(format!("horizontal edge ({mu},{nu}) row {row} col {col}"));
                }
                (2, None) => {
                    let top = base + s.targets[0].min(s.targets[1]);
                    let col = next_col;
                    next_col += 1;
                    vedges.push((top, col, EdgeTable::two_valued(3, mu, nu)));
                    emitted.push(format!(
                        "vertical edge ({mu},{nu}) rows {top}-{} col {col}",
                        top + 1
                    ));
                }
                _ => {
                    return Err(CompileError::UnsupportedGate("unexpected Potts step shape".into()))
                }
            }
        }
        provenance.push(ProvenanceEntry { gate_index: i, gate: format!("{g:?}"), emitted });
    }

    let m = next_col;
    let mut contracted = BTreeSet::new();
    for (r, row) in row_state.iter().enumerate() {
        let cols: BTreeSet<usize> = row.hedges.iter().map(|(c, _)| *c).collect();
        for col in 0..m - 1 {
            if !cols.contains(&(col + 1)) {
                contracted.insert((r, col));
            }
        }
    }
    let mut deleted = BTreeSet::new();
    let vset: BTreeSet<(usize, usize)> = vedges.iter().map(|(r, c, _)| (*r, *c)).collect();
    for r in 0..rows.saturating_sub(1) {
        for col in 0..m {
            if !vset.contains(&(r, col)) {
                deleted.insert((r, col));
            }
        }
    }
    let graph = PlanarCircuitGraph::new(rows, m, deleted, contracted).map_err(SpinlatError::from)?;

    // Order the weight tables to match the graph's derived edge lists.
    let mut horizontal = Vec::new();
    for e in graph.horizontal_edges() {
        let table = row_state[e.row]
            .hedges
            .iter()
            .find(|(c, _)| *c == e.col + 1)
            .map(|(_, t)| t.clone())
            .ok_or_else(|| CompileError::UnsupportedGate("horizontal edge without table".into()))?;
        horizontal.push(table);
    }
    let mut vertical = Vec::new();
    for e in graph.vertical_edges() {
        let table = vedges
            .iter()
            .find(|(r, c, _)| *r == e.row && *c == e.col)
            .map(|(_, _, t)| t.clone())
            .ok_or_else(|| CompileError::UnsupportedGate("vertical edge without table".into()))?;
        vertical.push(table);
    }
    let mut sites = Vec::new();
    for v in graph.vertices() {
        let seg = row_state[v.row]
            .hedges
            .iter()
            .filter(|(c, _)| *c <= v.col_start)
            .count();
        sites.push(row_state[v.row].site_tables[seg].clone());
    }

    // The builder lays gates out with time increasing to the right, while
    // the circuit convention feeds the right boundary in first. Every Potts
    // table here is symmetric, so the mirrored graph evaluates identically
    // with the boundary roles swapped: the input pattern goes on the left,
    // the readout on the right.
    let input: Vec<u8> = (0..rows).map(|r| (r % 2) as u8).collect();
    let readout_cfg: Vec<u8> = (0..logicals)
        .flat_map(|q| if readout[q] == 0 { [0u8, 1] } else { [1u8, 2] })
        .collect();
    let model = EdgeModel::new(
        graph,
        3,
        horizontal,
        vertical,
        sites,
        BoundaryCondition::Fixed { left: input.clone(), right: readout_cfg.clone() },
    )?;
    if let Some(cap) = max_free_spins {
        let free = model.oracle_plan()?.free;
        if free > cap {
            return Err(CompileError::WidthExceeded(format!(
                "{free} free qutrits exceed the cap {cap}"
            )));
        }
    }
    Ok(CompiledInstance {
        model: LatticeModel::Edge(model),
        kappa: Kappa::one(3),
        target: CompileTarget::MatrixElement {
            left: readout_cfg.iter().map(|&v| WireState::Basis(v)).collect(),
            right: input.iter().map(|&v| WireState::Basis(v)).collect(),
        },
        provenance,
    })
}

// ---------------------------------------------------------------------------
// LGT
// ---------------------------------------------------------------------------

/// Logical source alphabet of the LGT reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LgtLogicalGate {
    Rz { q: usize, xi: f64 },
    /// `diag(1,i,i,1)` on logical qubits `(q, q+1)`.
    Diag1ii1 { q: usize },
    /// Teleported `R_z(π/2)·H̃·R_z(α)` on logical qubit `q`; every other
    /// logical qubit is transported by an identity teleportation in the same
    /// layer.
    TeleportH { q: usize, alpha: f64 },
}

/// Ideal logical circuit (unitary: `H̃/√2` per teleport) over `2^logicals`.
pub fn lgt_logical_matrix(gates: &[LgtLogicalGate], logicals: usize) -> Result<CMat> {
    let mut u = crate::linalg::eye(1 << logicals);
    for g in gates {
        let (m, base, span) = match *g {
            LgtLogicalGate::Rz { q, xi } => (encodings::rz_matrix(xi), q, 1),
            LgtLogicalGate::Diag1ii1 { q } => {
                (crate::linalg::diag(&[C_ONE, C_I, C_I, C_ONE]), q, 2)
            }
            LgtLogicalGate::TeleportH { q, alpha } => (
                encodings::rz_matrix(std::f64::consts::FRAC_PI_2)
                    .dot(&encodings::hadamard())
                    .dot(&encodings::rz_matrix(alpha)),
                q,
                1,
            ),
        };
        if base + span > logicals {
            return Err(CompileError::UnsupportedGate(format!("{g:?} outside {logicals} qubits")));
        }
        u = embed_logical(&m, base, span, logicals).dot(&u);
    }
    Ok(u)
}

/// Lattice assembler for the LGT compiler.
struct LgtAssembler {
    model: LgtModel,
    /// Spatial position instances that carry computation (stay free).
    free: BTreeSet<(usize, Axis3, usize, usize)>, // (slice, dir, x, y)
    h_tilde_count: i64,
}

impl LgtAssembler {
    fn new(extents: (usize, usize, usize)) -> Result<Self> {
        let mut model = LgtModel::new(extents);
        // Checkerboard temporal gauge: every time edge fixed to (x+y) mod 2,
        // so each temporal face's two time edges always sum odd and
        // e^{βJ}=0 faces copy slices exactly.
        let (ex, ey, ez) = extents;
        for x in 0..=ex {
            for y in 0..=ey {
                for z in 0..ez {
                    model.gauge_fix(EdgeId3::new(x, y, z, Axis3::Z), ((x + y) % 2) as u8)?;
                }
            }
        }
        Ok(LgtAssembler { model, free: BTreeSet::new(), h_tilde_count: 0 })
    }

    /// Exact persistence of a spatial position from slice `t` to `t+1`.
    fn persist(&mut self, t: usize, dir: Axis3, x: usize, y: usize) -> Result<()> {
        let plane = match dir {
            Axis3::X => Plane3::Xz,
            Axis3::Y => Plane3::Yz,
            Axis3::Z => unreachable!("spatial positions never point along z"),
        };
        self.model.set_face(FaceId3::new(x, y, t, plane), FaceWeight::coupling(C_ZERO))?;
        self.free.insert((t, dir, x, y));
        self.free.insert((t + 1, dir, x, y));
        Ok(())
    }

    /// Place a spatial face at slice `t` whose free edges are `free_edges`,
    /// pinning the remaining boundary edges (time edges are already gauged;
    /// others get clamps) so the pinned parity is odd.
    fn spatial_face(
        &mut self,
        x: usize,
        y: usize,
        t: usize,
        value: Complex64,
        free_edges: &[(Axis3, usize, usize)],
    ) -> Result<()> {
        let face = FaceId3::new(x, y, t, Plane3::Xy);
        self.model.set_face(face, FaceWeight::coupling(value))?;
        let mut parity = 0u8;
        let mut unpinned = Vec::new();
        for e in face.edges() {
            if free_edges.contains(&(e.dir, e.x, e.y)) {
                self.free.insert((t, e.dir, e.x, e.y));
                continue;
            }
            if let Some(&v) = self.model.gauge_fixed.get(&e).or_else(|| self.model.clamped.get(&e)) {
                parity ^= v & 1;
            } else {
                unpinned.push(e);
            }
        }
        if unpinned.is_empty() {
            if parity != 1 {
                return Err(CompileError::BlockBudget(format!(
                    "face at ({x},{y},{t}) cannot reach odd pinned parity"
                )));
            }
            return Ok(());
        }
        // Pin the first leftover edge to fix the parity, the rest to 0.
        let want = 1 ^ parity;
        let mut first = true;
        for e in unpinned {
            let v = if first { want } else { 0 };
            first = false;
            self.model.clamp(e, v)?;
        }
        Ok(())
    }

    /// Clamp every interior spatial position instance that never became
    /// free, set the boundary configurations, and return the model.
    fn finish(
        mut self,
        input: &[(Axis3, usize, usize, u8)],
        readout: &[(Axis3, usize, usize, u8)],
    ) -> Result<LgtModel> {
        let (_, _, ez) = self.model.extents;
        let positions = self.model.spatial_positions();
        let mut right = vec![0u8; positions.len()];
        let mut left = vec![0u8; positions.len()];
        let index: BTreeMap<(Axis3, usize, usize), usize> =
            positions.iter().copied().enumerate().map(|(i, p)| (p, i)).collect();
        for &(dir, x, y, v) in input {
            right[index[&(dir, x, y)]] = v;
        }
        for &(dir, x, y, v) in readout {
            left[index[&(dir, x, y)]] = v;
        }
        for t in 1..ez {
            for &(dir, x, y) in &positions {
                if self.free.contains(&(t, dir, x, y)) {
                    continue;
                }
                let e = EdgeId3::new(x, y, t, dir);
                if !self.model.gauge_fixed.contains_key(&e) && !self.model.clamped.contains_key(&e)
                {
                    self.model.clamp(e, 0)?;
                }
            }
        }
        self.model.boundary = BoundaryCondition::Fixed { left, right };
        Ok(self.model)
    }
}

/// Compile an LGT logical circuit onto a 3D lattice (time along z): each
/// logical gate occupies one time slice, logical qubit `q` owns the four
/// y-edges at `x = 1+5q .. 4+5q` of the current data row, and teleport
/// layers move the whole array two rows up in y. `κ = 2^{(#H̃)/2}`.
pub fn compile_to_lgt(
    gates: &[LgtLogicalGate],
    logicals: usize,
    readout: &[u8],
    max_free_spins: Option<usize>,
) -> Result<CompiledInstance> {
    if logicals == 0 {
        return Err(CompileError::UnsupportedGate("need at least one logical qubit".into()));
    }
    if readout.len() != logicals || readout.iter().any(|&b| b > 1) {
        return Err(CompileError::UnsupportedGate(
            "readout must give one bit per logical qubit".into(),
        ));
    }
    let teleports = gates
        .iter()
        .filter(|g| matches!(g, LgtLogicalGate::TeleportH { .. }))
        .count();
    let ez = gates.len() + 1;
    let ex = 5 * logicals + 1;
    let ey = 2 * teleports + 3;
    let xoff = |q: usize| 1 + 5 * q;
    let mut asm = LgtAssembler::new((ex, ey, ez))?;
    let mut y_cur = 0usize;
    let mut provenance = Vec::new();

    for (i, g) in gates.iter().enumerate() {
        let t = i + 1;
        // Data qubits persist into this gate's slice.
        for q in 0..logicals {
            for j in 0..4 {
                asm.persist(t - 1, Axis3::Y, xoff(q) + j, y_cur)?;
            }
        }
        let mut emitted = Vec::new();
        match *g {
            LgtLogicalGate::Rz { q, xi } => {
                if q >= logicals {
                    return Err(CompileError::UnsupportedGate(format!("{g:?} outside array")));
                }
                let x = xoff(q) + 3;
                asm.spatial_face(x, y_cur, t, cis(xi), &[(Axis3::Y, x, y_cur)])?;
                emitted.push(format!("phase face e^{{i xi}} at ({x},{y_cur},{t})"));
            }
            LgtLogicalGate::Diag1ii1 { q } => {
                if q + 2 > logicals {
                    return Err(CompileError::UnsupportedGate(format!("{g:?} outside array")));
                }
                // Copy the left qubit onto the spacer, then e^{βJ}=i couples
                // spacer and right qubit.
                let xl = xoff(q) + 3;
                let xs = xoff(q) + 4;
                let xr = xoff(q + 1);
                asm.spatial_face(
                    xl,
                    y_cur,
                    t,
                    C_ZERO,
                    &[(Axis3::Y, xl, y_cur), (Axis3::Y, xs, y_cur)],
                )?;
                asm.spatial_face(
                    xs,
                    y_cur,
                    t,
                    C_I,
                    &[(Axis3::Y, xs, y_cur), (Axis3::Y, xr, y_cur)],
                )?;
                emitted.push(format!(
                    "copy face at ({xl},{y_cur},{t}), e^{{beta J}}=i face at ({xs},{y_cur},{t})"
                ));
            }
            LgtLogicalGate::TeleportH { q, alpha } => {
                if q >= logicals {
                    return Err(CompileError::UnsupportedGate(format!("{g:?} outside array")));
                }
                let (yb, yc) = (y_cur + 1, y_cur + 2);
                for ell in 0..logicals {
                    let x0 = xoff(ell);
                    let target = ell == q;
                    // Encoded-subspace constraints on the Bell and output rows.
                    for yrow in [yb, yc] {
                        for j in 0..3 {
                            asm.spatial_face(
                                x0 + j,
                                yrow,
                                t,
                                C_ZERO,
                                &[(Axis3::Y, x0 + j, yrow), (Axis3::Y, x0 + j + 1, yrow)],
                            )?;
                        }
                    }
                    // Bell projection chain through the carrier x-edge.
                    asm.spatial_face(
                        x0 - 1,
                        y_cur,
                        t,
                        C_ZERO,
                        &[(Axis3::Y, x0, y_cur), (Axis3::X, x0 - 1, yb)],
                    )?;
                    asm.spatial_face(
                        x0 - 1,
                        yb,
                        t,
                        C_ZERO,
                        &[(Axis3::X, x0 - 1, yb), (Axis3::Y, x0, yb)],
                    )?;
                    // Copy the Bell row into the middle x-edge, then couple
                    // into the output row.
                    asm.spatial_face(
                        x0 + 3,
                        yb,
                        t,
                        C_ZERO,
                        &[(Axis3::Y, x0 + 3, yb), (Axis3::X, x0 + 3, yc)],
                    )?;
                    let hop = if target { C_I } else { C_ZERO };
                    asm.spatial_face(
                        x0 + 3,
                        yc,
                        t,
                        hop,
                        &[(Axis3::X, x0 + 3, yc), (Axis3::Y, x0 + 3, yc)],
                    )?;
                    if target {
                        // Input rotation merged with the Bell-row i-phase:
                        // e^{i(α+π)}·i = e^{i(α+3π/2)} on one source qubit.
                        let x = x0 + 3;
                        asm.spatial_face(
                            x,
                            y_cur,
                            t,
                            cis(alpha + 1.5 * std::f64::consts::PI),
                            &[(Axis3::Y, x, y_cur)],
                        )?;
                        asm.h_tilde_count += 1;
                        emitted.push(format!(
                            "H-tilde block for qubit {ell} at y {y_cur}..{yc}, slice {t}"
                        ));
                    } else {
                        emitted.push(format!(
                            "transport block for qubit {ell} at y {y_cur}..{yc}, slice {t}"
                        ));
                    }
                }
                y_cur += 2;
            }
        }
        provenance.push(ProvenanceEntry { gate_index: i, gate: format!("{g:?}"), emitted });
    }
    // Data qubits persist into the readout slice.
    for q in 0..logicals {
        for j in 0..4 {
            asm.persist(ez - 1, Axis3::Y, xoff(q) + j, y_cur)?;
        }
    }

    let input: Vec<(Axis3, usize, usize, u8)> = Vec::new(); // |0…0⟩_L: all zeros
    let readout_pins: Vec<(Axis3, usize, usize, u8)> = (0..logicals)
        .flat_map(|q| (0..4).map(move |j| (Axis3::Y, xoff(q) + j, y_cur, readout[q])))
        .collect();
    let h_tilde = asm.h_tilde_count;
    let model = asm.finish(&input, &readout_pins)?;
    model.validate_gauge_fixing().map_err(SpinlatError::from)?;
    if let Some(cap) = max_free_spins {
        let free = model.oracle_plan()?.free;
        if free > cap {
            return Err(CompileError::WidthExceeded(format!(
                "{free} free spins exceed the cap {cap}"
            )));
        }
    }
    let left: Vec<WireState> = readout.iter().map(|&v| WireState::Basis(v)).collect();
    let right: Vec<WireState> = vec![WireState::Basis(0); logicals];
    Ok(CompiledInstance {
        model: LatticeModel::Lgt(model),
        kappa: Kappa::one(2).times_pow2_halves(h_tilde),
        target: CompileTarget::MatrixElement { left, right },
        provenance,
    })
}

/// The `(4x, 12y, 7z)` quantized lattice cover of a compiled instance's
/// extents: one teleportation block budget per cell of that size.
pub fn quantized_extents(extents: (usize, usize, usize)) -> (usize, usize, usize) {
    let up = |v: usize, m: usize| v.div_ceil(m).max(1) * m;
    (up(extents.0, 4), up(extents.1, 12), up(extents.2, 7))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use crate::map::model_to_circuit;
    use crate::qcirc::{matrix_element, ProductState};
    use crate::spinlat::{brute_force_partition, EnumLimits};

    fn plus_state(n: usize) -> ProductState {
        ProductState::plus(2, n)
    }

    #[test]
    fn empty_ising_circuit_is_a_vertex_chain() {
        // A·A = V on each wire: single vertex per row, Z/κ = ⟨+|V|+⟩.
        let inst = compile_to_ising(&[], 1).unwrap();
        let z = brute_force_partition(&inst.model, &EnumLimits::default()).unwrap().z;
        let got = inst.normalized(z);
        // ⟨+|V|+⟩ = (e^{iπ/4} + 1)/2
        let expect = (cis(std::f64::consts::FRAC_PI_4) + C_ONE) / 2.0;
        assert!((got - expect).norm() < 1e-13);
    }

    #[test]
    fn single_t_gate_roundtrip() {
        let gates = [IsingSourceGate::T { wire: 0 }];
        let inst = compile_to_ising(&gates, 1).unwrap();
        let z = brute_force_partition(&inst.model, &EnumLimits::default()).unwrap().z;
        let reference = ising_source_circuit(&gates, 1).unwrap();
        let me = matrix_element(&reference, &plus_state(1), &plus_state(1)).unwrap();
        assert!((inst.normalized(z) - me).norm() < 1e-12);
        // the mapped-circuit route agrees too
        let z2 = model_to_circuit(&inst.model).unwrap().evaluate().unwrap();
        assert!((inst.normalized(z2) - me).norm() < 1e-12);
    }

    #[test]
    fn ising_kappa_components_are_symbolic() {
        let gates = [IsingSourceGate::TTWvTT { top: 0 }, IsingSourceGate::T { wire: 1 }];
        let inst = compile_to_ising(&gates, 2).unwrap();
        // τ = 4 (from the two-qubit gate) + 1, n = 2 → κ = 2^{5/2 + 2}.
        assert_eq!(inst.kappa.pow2_halves, 5 + 4);
        assert_eq!(inst.kappa.powq_halves, 0);
    }

    #[test]
    fn six_vertex_single_v_gate_fixed_boundary() {
        let g = SixVertexSourceGate { matrix: crate::encodings::v_gate(), top: 0, label: "V".into() };
        let inst = compile_to_six_vertex(&[g], 2).unwrap();
        let z = brute_force_partition(&inst.model, &EnumLimits::default()).unwrap().z;
        // ⟨01|V|01⟩ = 1/√2.
        assert!((inst.normalized(z) - cr(1.0 / 2f64.sqrt())).norm() < 1e-13);
    }

    #[test]
    fn six_vertex_rejects_dense_gates() {
        let mut m = crate::linalg::eye(4);
        m[(0, 3)] = C_ONE; // w_{00,11} breaks the ice rule
        let g = SixVertexSourceGate { matrix: m, top: 0, label: "bad".into() };
        assert!(matches!(
            compile_to_six_vertex(&[g], 2),
            Err(CompileError::NotSixVertexForm(_))
        ));
    }

    #[test]
    fn potts_single_p8_reads_phase() {
        let gates = [PottsLogicalGate::P8 { q: 0 }];
        let inst = compile_to_potts(&gates, 1, 1e-3, &[1], Some(15)).unwrap();
        let z = brute_force_partition(&inst.model, &EnumLimits::default()).unwrap().z;
        // ⟨1_L|P8|0_L⟩ = 0
        assert!(inst.normalized(z).norm() < 1e-13);
        let inst0 = compile_to_potts(&gates, 1, 1e-3, &[0], Some(15)).unwrap();
        let z0 = brute_force_partition(&inst0.model, &EnumLimits::default()).unwrap().z;
        // ⟨0_L|P8|0_L⟩ = 1
        assert!((inst0.normalized(z0) - C_ONE).norm() < 1e-13);
    }

    #[test]
    fn potts_h_three_way_and_ideal() {
        let eps = 1e-3;
        let gates = [PottsLogicalGate::H { q: 0 }];
        let inst = compile_to_potts(&gates, 1, eps, &[0], Some(15)).unwrap();
        let z = brute_force_partition(&inst.model, &EnumLimits::default()).unwrap().z;
        let z_map = model_to_circuit(&inst.model).unwrap().evaluate().unwrap();
        assert!((z - z_map).norm() < 1e-12 * z.norm().max(1.0));
        // physical reference circuit route
        let reference = potts_reference_circuit(&gates, 1, eps).unwrap();
        let left = ProductState::basis(3, &[0, 1]);
        let right = ProductState::basis(3, &[0, 1]);
        let me = matrix_element(&reference, &left, &right).unwrap();
        assert!((inst.normalized(z) - me).norm() < 1e-12);
        // within the ε² budget of the ideal 1/√2
        assert!((inst.normalized(z) - cr(1.0 / 2f64.sqrt())).norm() < 2.0 * eps * eps);
    }

    #[test]
    fn lgt_rz_block_roundtrip() {
        let xi = std::f64::consts::PI / 5.0;
        for (readout, expect) in [(0u8, C_ONE), (1, C_ZERO)] {
            let gates = [LgtLogicalGate::Rz { q: 0, xi }];
            let inst = compile_to_lgt(&gates, 1, &[readout], Some(24)).unwrap();
            let z = brute_force_partition(&inst.model, &EnumLimits::default()).unwrap().z;
            // diag(1, e^{iξ}) on |0⟩_L, readout ⟨r|.
            assert!((inst.normalized(z) - expect).norm() < 1e-12, "readout {readout}");
        }
    }

    #[test]
    fn lgt_diag_block_entry() {
        // ⟨0,0|diag(1,i,i,1)|0,0⟩ = 1.
        let gates = [LgtLogicalGate::Diag1ii1 { q: 0 }];
        let inst = compile_to_lgt(&gates, 2, &[0, 0], Some(24)).unwrap();
        let z = brute_force_partition(&inst.model, &EnumLimits::default()).unwrap().z;
        assert!((inst.normalized(z) - C_ONE).norm() < 1e-12);
    }

    #[test]
    fn lgt_teleport_single_block() {
        let alpha = 0.0;
        let gates = [LgtLogicalGate::TeleportH { q: 0, alpha }];
        for (readout, expect) in [(0u8, cr(1.0 / 2f64.sqrt())), (1, C_I * cr(1.0 / 2f64.sqrt()))] {
            let inst = compile_to_lgt(&gates, 1, &[readout], Some(24)).unwrap();
            let z = brute_force_partition(&inst.model, &EnumLimits::default()).unwrap().z;
            // Z/κ = ⟨r|Rz(π/2)·H·Rz(0)|0⟩.
            let got = inst.normalized(z);
            assert!((got - expect).norm() < 1e-10, "readout {readout}: {got} vs {expect}");
            // the mapped-circuit route agrees
            let z2 = model_to_circuit(&inst.model).unwrap().evaluate().unwrap();
            assert!((z - z2).norm() < 1e-10 * z.norm().max(1.0));
        }
    }

    #[test]
    fn dqc1_identity_circuit() {
        let inst = dqc1_instance(&[], 2).unwrap();
        let z = brute_force_partition(&inst.model, &EnumLimits::default()).unwrap().z;
        // normalized trace of A·A = V⊗V: 2^{-2}·tr(V)² with tr(V) = e^{iπ/4}+1.
        let trv = cis(std::f64::consts::FRAC_PI_4) + C_ONE;
        let expect = trv * trv / 4.0;
        assert!((inst.normalized(z) - expect).norm() < 1e-12);
    }

    #[test]
    fn quantized_extents_cover() {
        assert_eq!(quantized_extents((6, 5, 2)), (8, 12, 7));
        assert_eq!(quantized_extents((4, 12, 7)), (4, 12, 7));
    }

    #[test]
    fn ten_random_gates_match_matrix_element() {
        // Larger than the enumeration cap allows, so the check runs purely
        // through the mapped circuit against the source matrix element.
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 3;
        let gates: Vec<IsingSourceGate> = (0..10)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    IsingSourceGate::TTWvTT { top: rng.gen_range(0..n - 1) }
                } else {
                    IsingSourceGate::T { wire: rng.gen_range(0..n) }
                }
            })
            .collect();
        let inst = compile_to_ising(&gates, n).unwrap();
        let z = model_to_circuit(&inst.model).unwrap().evaluate().unwrap();
        let reference = ising_source_circuit(&gates, n).unwrap();
        let me = matrix_element(&reference, &plus_state(n), &plus_state(n)).unwrap();
        assert!((inst.normalized(z) - me).norm() < 1e-9);
    }

    #[test]
    fn compiled_parameters_stay_in_the_allowed_sets() {
        // Ising: every edge carries e^{βJ}=i, every site e^{βh}=e^{iπ/4}.
        let inst = compile_to_ising(&[IsingSourceGate::TTWvTT { top: 0 }], 2).unwrap();
        let LatticeModel::Edge(m) = &inst.model else { unreachable!() };
        for t in m.horizontal_weights.iter().chain(m.vertical_weights.iter()) {
            let (mu, nu) = t.as_mu_nu(1e-12).unwrap();
            assert!((mu - C_I).norm() < 1e-12 && (nu - C_ONE).norm() < 1e-12);
        }
        for s in &m.vertex_weights {
            assert!((s.get(0) - cis(std::f64::consts::FRAC_PI_4)).norm() < 1e-12);
            assert!((s.get(1) - C_ONE).norm() < 1e-12);
        }

        // Six-vertex: every tensor keeps the ice-rule sparsity.
        let g = SixVertexSourceGate {
            matrix: crate::encodings::u_gate(0.9),
            top: 0,
            label: "U".into(),
        };
        let inst = compile_to_six_vertex(&[g], 4).unwrap();
        let LatticeModel::Vertex(m) = &inst.model else { unreachable!() };
        for col in &m.weights {
            for t in col {
                assert!(t.is_six_vertex_form(1e-12));
            }
        }

        // Potts: every table is two-valued with an allowed (μ,ν).
        let eps = 1e-3;
        let gates = [PottsLogicalGate::H { q: 0 }, PottsLogicalGate::P8 { q: 0 }];
        let inst = compile_to_potts(&gates, 1, eps, &[0], None).unwrap();
        let LatticeModel::Edge(m) = &inst.model else { unreachable!() };
        for t in m.horizontal_weights.iter().chain(m.vertical_weights.iter()) {
            let (mu, nu) = t.as_mu_nu(1e-12).expect("two-valued");
            assert!(crate::encodings::is_allowed_mu_nu(mu, nu, eps, 1e-12), "({mu},{nu})");
        }

        // LGT: every face weight is in {0, e^{iξ}, 1/2, ζ} or shifted (1,ζ).
        let gates = [LgtLogicalGate::TeleportH { q: 0, alpha: 1.2 }];
        let inst = compile_to_lgt(&gates, 1, &[0], None).unwrap();
        let LatticeModel::Lgt(m) = &inst.model else { unreachable!() };
        for w in m.faces.values() {
            assert!(crate::encodings::is_allowed_face(w.even, w.odd, 1e-3, 1e-12), "{w:?}");
        }
    }
}
