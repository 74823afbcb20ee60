//! Classical lattice models and the brute-force partition-function oracle.
//!
//! The partition function of every model is `Z = Σ_s Π w(interaction)`: a sum
//! over all configurations of the free (not boundary-fixed, not gauge-fixed)
//! spins of the product of local Boltzmann weights. [`brute_force_partition`]
//! computes exactly that by enumeration, capped at a configurable number of
//! free spins, and is the independent reference every circuit mapping in this
//! crate is tested against.

mod edge;
mod graph;
mod lgt;
mod plan;
mod vertex;

pub use edge::{EdgeModel, EdgeTable, SiteTable};
pub use graph::{GraphError, HorizontalEdge, PcgVertex, PlanarCircuitGraph, VerticalEdge};
pub use lgt::{Axis3, EdgeId3, FaceId3, FaceWeight, GaugeLoopError, LgtModel, Plane3};
pub use plan::{ConfigIter, OraclePlan, Slot, Term};
pub use vertex::{VertexModel, VertexTensor};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinlatError {
    #[error("enumeration too large: {free_spins} free spins exceed cap {cap}")]
    EnumerationTooLarge { free_spins: usize, cap: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed geometry: {0}")]
    MalformedGeometry(String),
    #[error("{0}")]
    GaugeLoop(#[from] GaugeLoopError),
}

impl From<GraphError> for SpinlatError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::MalformedGeometry(s) => SpinlatError::MalformedGeometry(s),
        }
    }
}

pub type Result<T> = std::result::Result<T, SpinlatError>;

/// Boundary condition shared by all model families. `Fixed` configurations
/// list one spin value per boundary site (top to bottom for 2D models, the
/// canonical spatial-edge order for the LGT).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryCondition {
    Fixed { left: Vec<u8>, right: Vec<u8> },
    Open,
    Periodic,
}

impl BoundaryCondition {
    pub fn validate(&self, boundary_size: usize, q: usize) -> Result<()> {
        if let BoundaryCondition::Fixed { left, right } = self {
            if left.len() != boundary_size || right.len() != boundary_size {
                return Err(SpinlatError::InvalidConfig(format!(
                    "boundary configs must have length {boundary_size}, got ({}, {})",
                    left.len(),
                    right.len()
                )));
            }
            if left.iter().chain(right.iter()).any(|&v| v as usize >= q) {
                return Err(SpinlatError::InvalidConfig(format!("fixed spin value >= q = {q}")));
            }
        }
        Ok(())
    }
}

/// Where a partition value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Oracle,
    Circuit,
    Estimator,
}

/// A partition function value together with its normalization and origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionValue {
    pub z: Complex64,
    pub kappa: Complex64,
    pub provenance: Provenance,
}

/// Enumeration caps, in free spins. Conservative defaults: 24 for q=2,
/// 15 for q=3, and a log-scaled bound elsewhere. Exceeding the cap is an
/// error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumLimits {
    pub q2: usize,
    pub q3: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { q2: 24, q3: 15 }
    }
}

impl EnumLimits {
    pub fn cap(&self, q: usize) -> usize {
        match q {
            0 | 1 => 0,
            2 => self.q2,
            3 => self.q3,
            q => ((self.q2 as f64) / (q as f64).log2()).floor() as usize,
        }
    }

    /// Uniform cap for every q (the CLI `--cap` override).
    pub fn uniform(cap: usize) -> Self {
        EnumLimits { q2: cap, q3: cap }
    }
}

/// Tagged union over the model families.
#[derive(Debug, Clone)]
pub enum LatticeModel {
    Vertex(VertexModel),
    Edge(EdgeModel),
    Lgt(LgtModel),
}

impl LatticeModel {
    pub fn q(&self) -> usize {
        match self {
            LatticeModel::Vertex(m) => m.q,
            LatticeModel::Edge(m) => m.q,
            LatticeModel::Lgt(_) => 2,
        }
    }

    pub fn boundary(&self) -> &BoundaryCondition {
        match self {
            LatticeModel::Vertex(m) => &m.boundary,
            LatticeModel::Edge(m) => &m.boundary,
            LatticeModel::Lgt(m) => &m.boundary,
        }
    }

    pub fn oracle_plan(&self) -> Result<OraclePlan> {
        match self {
            LatticeModel::Vertex(m) => m.oracle_plan(),
            LatticeModel::Edge(m) => m.oracle_plan(),
            LatticeModel::Lgt(m) => m.oracle_plan(),
        }
    }

    /// Number of free spins the oracle would enumerate.
    pub fn free_spins(&self) -> Result<usize> {
        Ok(self.oracle_plan()?.free)
    }
}

/// Exact partition function by enumeration over all free-spin
/// configurations; κ = 1 and the provenance is `Oracle`.
pub fn brute_force_partition(model: &LatticeModel, limits: &EnumLimits) -> Result<PartitionValue> {
    model.oracle_plan()?.brute_force(limits)
}

/// Iterator over `(free-spin configuration, total Boltzmann weight)` pairs in
/// canonical order; summing the weights reproduces
/// [`brute_force_partition`].
pub fn enumerate_configs(model: &LatticeModel, limits: &EnumLimits) -> Result<ConfigIter> {
    model.oracle_plan()?.configs(limits)
}

/// Gauge-fixing validity check for LGT models (re-exported at module level
/// next to the other model-level operations).
pub fn validate_gauge_fixing(model: &LgtModel) -> std::result::Result<(), GaugeLoopError> {
    model.validate_gauge_fixing()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, C_I, C_ONE};

    #[test]
    fn single_free_spin_enumeration() {
        // One free q=2 spin, no interactions: yields (0, 1), (1, 1).
        let g = PlanarCircuitGraph::full_grid(1, 1).unwrap();
        let m = EdgeModel::new(
            g,
            2,
            vec![],
            vec![],
            vec![SiteTable::identity(2)],
            BoundaryCondition::Open,
        )
        .unwrap();
        let items: Vec<_> = enumerate_configs(&LatticeModel::Edge(m), &EnumLimits::default())
            .unwrap()
            .collect();
        assert_eq!(items.len(), 2);
        assert_eq!(items[0].0, vec![0]);
        assert_eq!(items[1].0, vec![1]);
        assert!(items.iter().all(|(_, w)| (w - C_ONE).norm() < 1e-15));
    }

    #[test]
    fn ising_edge_enumeration_weights() {
        let g = PlanarCircuitGraph::full_grid(1, 2).unwrap();
        let m = EdgeModel::ising_uniform(g, cr(2.0), C_ONE, BoundaryCondition::Open).unwrap();
        let weights: Vec<f64> = enumerate_configs(&LatticeModel::Edge(m), &EnumLimits::default())
            .unwrap()
            .map(|(_, w)| w.re)
            .collect();
        assert_eq!(weights, vec![2.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn enumeration_sum_matches_brute_force() {
        let mut lgt = LgtModel::new((1, 1, 1));
        lgt.set_face(FaceId3::new(0, 0, 0, Plane3::Xy), FaceWeight::coupling(C_I)).unwrap();
        lgt.set_face(FaceId3::new(0, 0, 0, Plane3::Yz), FaceWeight::coupling(cr(0.5))).unwrap();
        let model = LatticeModel::Lgt(lgt);
        let z = brute_force_partition(&model, &EnumLimits::default()).unwrap().z;
        let s: Complex64 = enumerate_configs(&model, &EnumLimits::default())
            .unwrap()
            .map(|(_, w)| w)
            .sum();
        assert!((z - s).norm() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let g = PlanarCircuitGraph::full_grid(5, 5).unwrap();
        let m = EdgeModel::ising_uniform(g, C_I, C_ONE, BoundaryCondition::Open).unwrap();
        let res = brute_force_partition(&LatticeModel::Edge(m), &EnumLimits::uniform(10));
        assert!(matches!(res, Err(SpinlatError::EnumerationTooLarge { free_spins: 25, cap: 10 })));
    }

    #[test]
    fn potts_energy_shift_scales_partition_function() {
        // (μ,ν) → (cμ,cν) multiplies Z by c^|E| exactly.
        let g = PlanarCircuitGraph::full_grid(2, 2).unwrap();
        let edges = (g.horizontal_edges().len() + g.vertical_edges().len()) as i32;
        let (mu, nu) = (cr(0.7), C_I);
        let c = Complex64::new(0.3, -1.1);
        let base = EdgeModel::potts_uniform(g.clone(), 3, mu, nu, BoundaryCondition::Open).unwrap();
        let scaled = EdgeModel::potts_uniform(g, 3, c * mu, c * nu, BoundaryCondition::Open).unwrap();
        let zb = brute_force_partition(&LatticeModel::Edge(base), &EnumLimits::default()).unwrap().z;
        let zs = brute_force_partition(&LatticeModel::Edge(scaled), &EnumLimits::default()).unwrap().z;
        let expect = zb * c.powi(edges);
        assert!((zs - expect).norm() < 1e-9 * expect.norm().max(1.0));
    }

    #[test]
    fn invalid_fixed_value_is_rejected() {
        let g = PlanarCircuitGraph::full_grid(1, 2).unwrap();
        let res = EdgeModel::ising_uniform(
            g,
            cr(2.0),
            C_ONE,
            BoundaryCondition::Fixed { left: vec![2], right: vec![0] },
        );
        assert!(matches!(res, Err(SpinlatError::InvalidConfig(_))));
    }
}
