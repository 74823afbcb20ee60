//! Versioned JSON formats for models, circuits, mapped circuits, compiled
//! instances and estimates. Complex numbers are always two-element
//! `[re, im]` arrays; the schema version field `latcirc_schema` is checked
//! on every input file.

use crate::compile::{CompileTarget, CompiledInstance};
use crate::estimate::Estimate;
use crate::linalg::CMat;
use crate::map::{EvalMode, Kappa, MappedCircuit, WireState};
use crate::qcirc::{Circuit, Gate};
use crate::spinlat::{
    Axis3, BoundaryCondition, EdgeId3, EdgeModel, EdgeTable, FaceId3, FaceWeight, LatticeModel,
    LgtModel, Plane3, PlanarCircuitGraph, SiteTable, VertexModel, VertexTensor,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    Version(u32),
    #[error("invalid {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, SchemaError>;

pub type CNum = [f64; 2];

fn c2j(z: Complex64) -> CNum {
    [z.re, z.im]
}

fn j2c(v: CNum) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn cvec2j(v: &[Complex64]) -> Vec<CNum> {
    v.iter().map(|&z| c2j(z)).collect()
}

fn j2cvec(v: &[CNum]) -> Vec<Complex64> {
    v.iter().map(|&x| j2c(x)).collect()
}

// ---------------------------------------------------------------------------
// Boundary conditions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundaryJson {
    Fixed { left: Vec<u8>, right: Vec<u8> },
    Open,
    Periodic,
}

impl From<&BoundaryCondition> for BoundaryJson {
    fn from(b: &BoundaryCondition) -> Self {
        match b {
            BoundaryCondition::Fixed { left, right } => {
                BoundaryJson::Fixed { left: left.clone(), right: right.clone() }
            }
            BoundaryCondition::Open => BoundaryJson::Open,
            BoundaryCondition::Periodic => BoundaryJson::Periodic,
        }
    }
}

impl From<BoundaryJson> for BoundaryCondition {
    fn from(b: BoundaryJson) -> Self {
        match b {
            BoundaryJson::Fixed { left, right } => BoundaryCondition::Fixed { left, right },
            BoundaryJson::Open => BoundaryCondition::Open,
            BoundaryJson::Periodic => BoundaryCondition::Periodic,
        }
    }
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub m: usize,
    pub deleted_vertical: Vec<(usize, usize)>,
    pub contracted_horizontal: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FaceJson {
    pub at: [usize; 3],
    pub plane: String,
    pub even: CNum,
    pub odd: CNum,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PinJson {
    pub at: [usize; 3],
    pub dir: String,
    pub value: u8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KappaJson {
    pub value: CNum,
    pub pow2_halves: i64,
    pub powq_halves: i64,
    pub residual: CNum,
}

impl From<&Kappa> for KappaJson {
    fn from(k: &Kappa) -> Self {
        KappaJson {
            value: c2j(k.value()),
            pow2_halves: k.pow2_halves,
            powq_halves: k.powq_halves,
            residual: c2j(k.residual),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "target_kind", rename_all = "snake_case")]
pub enum TargetJson {
    MatrixElement { left: Vec<String>, right: Vec<String> },
    NormalizedTrace { n: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompiledJson {
    pub kappa: KappaJson,
    pub target: TargetJson,
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModelBodyJson {
    Vertex {
        q: usize,
        rows: usize,
        cols: usize,
        /// One flat `q^4` tensor per vertex, column by column.
        weights: Vec<Vec<Vec<CNum>>>,
    },
    Edge {
        q: usize,
        graph: GraphJson,
        horizontal_weights: Vec<Vec<CNum>>,
        vertical_weights: Vec<Vec<CNum>>,
        vertex_weights: Vec<Vec<CNum>>,
    },
    Lgt {
        extents: [usize; 3],
        faces: Vec<FaceJson>,
        gauge_fixed: Vec<PinJson>,
        clamped: Vec<PinJson>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelJson {
    pub latcirc_schema: u32,
    #[serde(flatten)]
    pub body: ModelBodyJson,
    pub boundary: BoundaryJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compiled: Option<CompiledJson>,
}

fn wire_state_to_string(w: &WireState) -> String {
    match w {
        WireState::Basis(v) => v.to_string(),
        WireState::Plus => "+".to_string(),
    }
}

pub fn wire_state_from_str(s: &str) -> Result<WireState> {
    if s == "+" {
        return Ok(WireState::Plus);
    }
    s.parse::<u8>()
        .map(WireState::Basis)
        .map_err(|_| SchemaError::Invalid(format!("wire state '{s}'")))
}

fn plane_to_string(p: Plane3) -> &'static str {
    match p {
        Plane3::Xy => "xy",
        Plane3::Xz => "xz",
        Plane3::Yz => "yz",
    }
}

fn plane_from_str(s: &str) -> Result<Plane3> {
    match s {
        "xy" => Ok(Plane3::Xy),
        "xz" => Ok(Plane3::Xz),
        "yz" => Ok(Plane3::Yz),
        _ => Err(SchemaError::Invalid(format!("plane '{s}'"))),
    }
}

fn dir_to_string(d: Axis3) -> &'static str {
    match d {
        Axis3::X => "x",
        Axis3::Y => "y",
        Axis3::Z => "z",
    }
}

fn dir_from_str(s: &str) -> Result<Axis3> {
    match s {
        "x" => Ok(Axis3::X),
        "y" => Ok(Axis3::Y),
        "z" => Ok(Axis3::Z),
        _ => Err(SchemaError::Invalid(format!("direction '{s}'"))),
    }
}

pub fn model_to_json(model: &LatticeModel) -> ModelJson {
    let (body, boundary) = match model {
        LatticeModel::Vertex(m) => (
            ModelBodyJson::Vertex {
                q: m.q,
                rows: m.rows,
                cols: m.cols,
                weights: m
                    .weights
                    .iter()
                    .map(|col| col.iter().map(|t| cvec2j(t.entries())).collect())
                    .collect(),
            },
            (&m.boundary).into(),
        ),
        LatticeModel::Edge(m) => (
            ModelBodyJson::Edge {
                q: m.q,
                graph: GraphJson {
                    n: m.graph.n(),
                    m: m.graph.m(),
                    deleted_vertical: m.graph.deleted_vertical().iter().copied().collect(),
                    contracted_horizontal: m.graph.contracted_horizontal().iter().copied().collect(),
                },
                horizontal_weights: m.horizontal_weights.iter().map(|t| cvec2j(t.entries())).collect(),
                vertical_weights: m.vertical_weights.iter().map(|t| cvec2j(t.entries())).collect(),
                vertex_weights: m.vertex_weights.iter().map(|t| cvec2j(t.entries())).collect(),
            },
            (&m.boundary).into(),
        ),
        LatticeModel::Lgt(m) => (
            ModelBodyJson::Lgt {
                extents: [m.extents.0, m.extents.1, m.extents.2],
                faces: m
                    .faces
                    .iter()
                    .map(|(f, w)| FaceJson {
                        at: [f.x, f.y, f.z],
                        plane: plane_to_string(f.plane).to_string(),
                        even: c2j(w.even),
                        odd: c2j(w.odd),
                    })
                    .collect(),
                gauge_fixed: m
                    .gauge_fixed
                    .iter()
                    .map(|(e, &v)| PinJson {
                        at: [e.x, e.y, e.z],
                        dir: dir_to_string(e.dir).to_string(),
                        value: v,
                    })
                    .collect(),
                clamped: m
                    .clamped
                    .iter()
                    .map(|(e, &v)| PinJson {
                        at: [e.x, e.y, e.z],
                        dir: dir_to_string(e.dir).to_string(),
                        value: v,
                    })
                    .collect(),
            },
            (&m.boundary).into(),
        ),
    };
    ModelJson { latcirc_schema: SCHEMA_VERSION, body, boundary, compiled: None }
}

pub fn model_from_json(j: ModelJson) -> Result<LatticeModel> {
    if j.latcirc_schema != SCHEMA_VERSION {
        return Err(SchemaError::Version(j.latcirc_schema));
    }
    let boundary: BoundaryCondition = j.boundary.into();
    let invalid = |e: &dyn std::fmt::Display| SchemaError::Invalid(e.to_string());
    match j.body {
        ModelBodyJson::Vertex { q, rows, cols, weights } => {
            let tensors: Vec<Vec<VertexTensor>> = weights
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|t| VertexTensor::new(q, j2cvec(t)))
                        .collect::<std::result::Result<_, _>>()
                })
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| invalid(&e))?;
            let m = VertexModel::new(rows, cols, q, tensors, boundary).map_err(|e| invalid(&e))?;
            Ok(LatticeModel::Vertex(m))
        }
        ModelBodyJson::Edge { q, graph, horizontal_weights, vertical_weights, vertex_weights } => {
            let g = PlanarCircuitGraph::new(
                graph.n,
                graph.m,
                graph.deleted_vertical.into_iter().collect(),
                graph.contracted_horizontal.into_iter().collect(),
            )
            .map_err(|e| invalid(&e))?;
            let h = horizontal_weights
                .iter()
                .map(|t| EdgeTable::new(q, j2cvec(t)))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| invalid(&e))?;
            let v = vertical_weights
                .iter()
                .map(|t| EdgeTable::new(q, j2cvec(t)))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| invalid(&e))?;
            let s = vertex_weights
                .iter()
                .map(|t| SiteTable::new(q, j2cvec(t)))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| invalid(&e))?;
            let m = EdgeModel::new(g, q, h, v, s, boundary).map_err(|e| invalid(&e))?;
            Ok(LatticeModel::Edge(m))
        }
        ModelBodyJson::Lgt { extents, faces, gauge_fixed, clamped } => {
            let mut m = LgtModel::new((extents[0], extents[1], extents[2]));
            for f in faces {
                let face = FaceId3::new(f.at[0], f.at[1], f.at[2], plane_from_str(&f.plane)?);
                m.set_face(face, FaceWeight { even: j2c(f.even), odd: j2c(f.odd) })
                    .map_err(|e| invalid(&e))?;
            }
            for p in gauge_fixed {
                let e = EdgeId3::new(p.at[0], p.at[1], p.at[2], dir_from_str(&p.dir)?);
                m.gauge_fix(e, p.value).map_err(|e| invalid(&e))?;
            }
            for p in clamped {
                let e = EdgeId3::new(p.at[0], p.at[1], p.at[2], dir_from_str(&p.dir)?);
                m.clamp(e, p.value).map_err(|e| invalid(&e))?;
            }
            m.boundary = boundary;
            Ok(LatticeModel::Lgt(m))
        }
    }
}

pub fn compiled_to_json(inst: &CompiledInstance) -> ModelJson {
    let mut j = model_to_json(&inst.model);
    let target = match &inst.target {
        CompileTarget::MatrixElement { left, right } => TargetJson::MatrixElement {
            left: left.iter().map(wire_state_to_string).collect(),
            right: right.iter().map(wire_state_to_string).collect(),
        },
        CompileTarget::NormalizedTrace { n } => TargetJson::NormalizedTrace { n: *n },
    };
    let provenance = inst
        .provenance
        .iter()
        .map(|p| format!("{} -> {}", p.gate, p.emitted.join("; ")))
        .collect();
    j.compiled = Some(CompiledJson { kappa: (&inst.kappa).into(), target, provenance });
    j
}

// ---------------------------------------------------------------------------
// Circuits
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateJson {
    pub targets: Vec<usize>,
    pub matrix: Vec<Vec<CNum>>,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitJson {
    pub latcirc_schema: u32,
    pub q: usize,
    pub width: usize,
    pub prefactor: CNum,
    pub gates: Vec<GateJson>,
}

pub fn circuit_to_json(c: &Circuit) -> CircuitJson {
    CircuitJson {
        latcirc_schema: SCHEMA_VERSION,
        q: c.q,
        width: c.width,
        prefactor: c2j(c.scalar_prefactor),
        gates: c
            .gates
            .iter()
            .map(|g| GateJson {
                targets: g.targets.clone(),
                matrix: (0..g.matrix.dim().0)
                    .map(|r| (0..g.matrix.dim().1).map(|cc| c2j(g.matrix[(r, cc)])).collect())
                    .collect(),
                label: g.label.clone(),
            })
            .collect(),
    }
}

pub fn circuit_from_json(j: CircuitJson) -> Result<Circuit> {
    if j.latcirc_schema != SCHEMA_VERSION {
        return Err(SchemaError::Version(j.latcirc_schema));
    }
    let mut c = Circuit::new(j.width, j.q);
    c.scalar_prefactor = j2c(j.prefactor);
    for g in j.gates {
        let rows = g.matrix.len();
        let cols = g.matrix.first().map_or(0, |r| r.len());
        let mut m: CMat = ndarray::Array2::from_elem((rows, cols), Complex64::new(0.0, 0.0));
        for (r, row) in g.matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(SchemaError::Invalid("ragged gate matrix".into()));
            }
            for (cc, v) in row.iter().enumerate() {
                m[(r, cc)] = j2c(*v);
            }
        }
        let gate = Gate::new(m, g.targets, g.label, j.q, j.width)
            .map_err(|e| SchemaError::Invalid(e.to_string()))?;
        c.gates.push(gate);
    }
    Ok(c)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MappedCircuitJson {
    #[serde(flatten)]
    pub circuit: CircuitJson,
    pub kappa: CNum,
    pub kappa_pow2_halves: i64,
    pub kappa_powq_halves: i64,
    pub kappa_residual: CNum,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<String>>,
}

pub fn mapped_to_json(m: &MappedCircuit) -> MappedCircuitJson {
    MappedCircuitJson {
        circuit: circuit_to_json(&m.circuit),
        kappa: c2j(m.kappa.value()),
        kappa_pow2_halves: m.kappa.pow2_halves,
        kappa_powq_halves: m.kappa.powq_halves,
        kappa_residual: c2j(m.kappa.residual),
        mode: match m.mode {
            EvalMode::Fixed => "fixed".to_string(),
            EvalMode::Open => "open".to_string(),
            EvalMode::Periodic => "periodic".to_string(),
        },
        left: m.left.as_ref().map(|v| v.iter().map(wire_state_to_string).collect()),
        right: m.right.as_ref().map(|v| v.iter().map(wire_state_to_string).collect()),
    }
}

pub fn mapped_from_json(j: MappedCircuitJson) -> Result<MappedCircuit> {
    let q = j.circuit.q;
    let circuit = circuit_from_json(j.circuit)?;
    let mode = match j.mode.as_str() {
        "fixed" => EvalMode::Fixed,
        "open" => EvalMode::Open,
        "periodic" => EvalMode::Periodic,
        other => return Err(SchemaError::Invalid(format!("mode '{other}'"))),
    };
    let parse_states = |v: Option<Vec<String>>| -> Result<Option<Vec<WireState>>> {
        v.map(|states| states.iter().map(|s| wire_state_from_str(s)).collect()).transpose()
    };
    let kappa = Kappa {
        q,
        pow2_halves: j.kappa_pow2_halves,
        powq_halves: j.kappa_powq_halves,
        residual: j2c(j.kappa_residual),
    };
    Ok(MappedCircuit { circuit, kappa, mode, left: parse_states(j.left)?, right: parse_states(j.right)? })
}

// ---------------------------------------------------------------------------
// Source circuits for the compilers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum SourceGateJson {
    T { wire: usize },
    Ttwvtt { top: usize },
    U { top: usize, t: f64 },
    V { top: usize },
    SixVertex { top: usize, matrix: Vec<Vec<CNum>> },
    I1 { q: usize },
    P8 { q: usize },
    H { q: usize },
    I2 { q: usize },
    Cz { q: usize },
    Rz { q: usize, xi: f64 },
    Diag1ii1 { q: usize },
    TeleportH { q: usize, alpha: f64 },
}

/// Source circuit for the compilers: `kind` picks the alphabet.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SourceCircuitJson {
    pub latcirc_schema: u32,
    pub kind: String,
    /// Wire count (ising: qubits; six-vertex: physical wires; potts/lgt:
    /// logical qubits).
    pub width: usize,
    pub gates: Vec<SourceGateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub readout: Option<Vec<u8>>,
}

// ---------------------------------------------------------------------------
// Estimates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateJson {
    pub value: CNum,
    pub epsilon: f64,
    pub shots_used: u64,
    pub p0_re: f64,
    pub p0_im: f64,
}

pub fn estimate_to_json(e: &Estimate) -> EstimateJson {
    EstimateJson {
        value: c2j(e.value),
        epsilon: e.epsilon,
        shots_used: e.shots_used,
        p0_re: e.p0_re,
        p0_im: e.p0_im,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, C_I, C_ONE};
    use crate::spinlat::{brute_force_partition, EnumLimits};

    #[test]
    fn edge_model_round_trip() {
        let g = PlanarCircuitGraph::full_grid(2, 3).unwrap();
        let m = EdgeModel::ising_uniform(g, C_I, cr(1.0), BoundaryCondition::Open).unwrap();
        let model = LatticeModel::Edge(m);
        let z0 = brute_force_partition(&model, &EnumLimits::default()).unwrap().z;
        let text = serde_json::to_string(&model_to_json(&model)).unwrap();
        let back = model_from_json(serde_json::from_str(&text).unwrap()).unwrap();
        let z1 = brute_force_partition(&back, &EnumLimits::default()).unwrap().z;
        assert!((z0 - z1).norm() < 1e-14);
    }

    #[test]
    fn lgt_model_round_trip() {
        let mut m = LgtModel::new((1, 1, 1));
        m.temporal_gauge().unwrap();
        m.set_face(FaceId3::new(0, 0, 0, Plane3::Xy), FaceWeight::coupling(C_I)).unwrap();
        m.boundary = BoundaryCondition::Open;
        let model = LatticeModel::Lgt(m);
        let z0 = brute_force_partition(&model, &EnumLimits::default()).unwrap().z;
        let text = serde_json::to_string(&model_to_json(&model)).unwrap();
        let back = model_from_json(serde_json::from_str(&text).unwrap()).unwrap();
        let z1 = brute_force_partition(&back, &EnumLimits::default()).unwrap().z;
        assert!((z0 - z1).norm() < 1e-12);
    }

    #[test]
    fn schema_version_is_checked() {
        let g = PlanarCircuitGraph::full_grid(1, 2).unwrap();
        let m = EdgeModel::ising_uniform(g, C_I, C_ONE, BoundaryCondition::Open).unwrap();
        let mut j = model_to_json(&LatticeModel::Edge(m));
        j.latcirc_schema = 99;
        assert!(matches!(model_from_json(j), Err(SchemaError::Version(99))));
    }

    #[test]
    fn mapped_circuit_round_trip_evaluates_identically() {
        let g = PlanarCircuitGraph::full_grid(2, 2).unwrap();
        let m = EdgeModel::ising_uniform(g, C_I, cr(1.0), BoundaryCondition::Open).unwrap();
        let mapped = crate::map::edge_to_circuit(&m).unwrap();
        let z0 = mapped.evaluate().unwrap();
        let text = serde_json::to_string(&mapped_to_json(&mapped)).unwrap();
        let back = mapped_from_json(serde_json::from_str(&text).unwrap()).unwrap();
        let z1 = back.evaluate().unwrap();
        assert!((z0 - z1).norm() < 1e-14);
    }

    #[test]
    fn wire_states_parse() {
        assert_eq!(wire_state_from_str("+").unwrap(), WireState::Plus);
        assert_eq!(wire_state_from_str("2").unwrap(), WireState::Basis(2));
        assert!(wire_state_from_str("x").is_err());
    }
}
