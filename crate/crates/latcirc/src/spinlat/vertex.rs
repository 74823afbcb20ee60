//! Vertex models on the tilted 2D square lattice: spins live on lattice
//! edges (circuit wire segments), rank-4 Boltzmann weights live on vertices.
//!
//! Geometry convention (the tilted lattice drawn as a brickwork): a model with
//! `rows` vertex rows acts on `2·rows` wires. Grid columns are numbered left
//! to right; the column adjacent to the right boundary always holds gates on
//! the wire pairs `(0,1), (2,3), …` and columns alternate between that
//! even-pair layout (`rows` vertices) and the interior odd-pair layout
//! (`rows−1` vertices). Each vertex's `(k,l)` legs point toward the right
//! boundary (the circuit input) and its `(i,j)` legs toward the left.

use super::plan::{OraclePlan, Slot, Term};
use super::{BoundaryCondition, SpinlatError};
use crate::linalg::{CMat, C_ONE, C_ZERO};
use num_complex::Complex64;

/// Rank-4 weight tensor `w(s_i, s_j, s_k, s_l)` with `q^4` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexTensor {
    q: usize,
    w: Vec<Complex64>,
}

impl VertexTensor {
    pub fn new(q: usize, w: Vec<Complex64>) -> Result<Self, SpinlatError> {
        if w.len() != q.pow(4) {
            return Err(SpinlatError::MalformedGeometry(format!(
                "vertex tensor needs q^4 = {} entries, got {}",
                q.pow(4),
                w.len()
            )));
        }
        Ok(VertexTensor { q, w })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// The identity vertex: `w(i,j,k,l) = δ_{ik} δ_{jl}`.
    pub fn identity(q: usize) -> Self {
        let mut w = vec![C_ZERO; q.pow(4)];
        for i in 0..q {
            for j in 0..q {
                let idx = ((i * q + j) * q + i) * q + j;
                w[idx] = C_ONE;
            }
        }
        VertexTensor { q, w }
    }

    #[inline]
    pub fn get(&self, i: u8, j: u8, k: u8, l: u8) -> Complex64 {
        let q = self.q;
        self.w[((i as usize * q + j as usize) * q + k as usize) * q + l as usize]
    }

    pub fn set(&mut self, i: u8, j: u8, k: u8, l: u8, v: Complex64) {
        let q = self.q;
        self.w[((i as usize * q + j as usize) * q + k as usize) * q + l as usize] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.w
    }

    /// The `q²×q²` gate matrix `W[(i,j),(k,l)] = w(i,j,k,l)`; right indices
    /// `(k,l)` are the gate input.
    pub fn as_gate_matrix(&self) -> CMat {
        let q = self.q;
        let d = q * q;
        let mut m = ndarray::Array2::from_elem((d, d), C_ZERO);
        for i in 0..q {
            for j in 0..q {
                for k in 0..q {
                    for l in 0..q {
                        m[(i * q + j, k * q + l)] = self.get(i as u8, j as u8, k as u8, l as u8);
                    }
                }
            }
        }
        m
    }

    /// Inverse of [`Self::as_gate_matrix`].
    pub fn from_gate_matrix(m: &CMat, q: usize) -> Result<Self, SpinlatError> {
        let d = q * q;
        if m.dim() != (d, d) {
            return Err(SpinlatError::MalformedGeometry(format!(
                "expected {d}x{d} gate matrix, got {:?}",
                m.dim()
            )));
        }
        let mut t = VertexTensor { q, w: vec![C_ZERO; q.pow(4)] };
        for i in 0..q {
            for j in 0..q {
                for k in 0..q {
                    for l in 0..q {
                        t.set(i as u8, j as u8, k as u8, l as u8, m[(i * q + j, k * q + l)]);
                    }
                }
            }
        }
        Ok(t)
    }

    /// Whether only the six ice-rule entries can be non-zero (q = 2):
    /// `w_{00,00}, w_{01,01}, w_{01,10}, w_{10,01}, w_{10,10}, w_{11,11}`.
    pub fn is_six_vertex_form(&self, tol: f64) -> bool {
        if self.q != 2 {
            return false;
        }
        const ALLOWED: [(u8, u8, u8, u8); 6] = [
            (0, 0, 0, 0),
            (0, 1, 0, 1),
            (0, 1, 1, 0),
            (1, 0, 0, 1),
            (1, 0, 1, 0),
            (1, 1, 1, 1),
        ];
        for i in 0..2u8 {
            for j in 0..2u8 {
                for k in 0..2u8 {
                    for l in 0..2u8 {
                        if !ALLOWED.contains(&(i, j, k, l)) && self.get(i, j, k, l).norm() > tol {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// A tilted-grid vertex model: `rows × cols` vertices over `2·rows` wires.
#[derive(Debug, Clone)]
pub struct VertexModel {
    pub rows: usize,
    pub cols: usize,
    pub q: usize,
    /// `weights[c]` holds the column-`c` vertex tensors, top to bottom.
    pub weights: Vec<Vec<VertexTensor>>,
    pub boundary: BoundaryCondition,
}

impl VertexModel {
    pub fn new(
        rows: usize,
        cols: usize,
        q: usize,
        weights: Vec<Vec<VertexTensor>>,
        boundary: BoundaryCondition,
    ) -> Result<Self, SpinlatError> {
        if rows == 0 || cols == 0 || q < 2 {
            return Err(SpinlatError::MalformedGeometry(
                "vertex model needs rows, cols >= 1 and q >= 2".into(),
            ));
        }
        let model = VertexModel { rows, cols, q, weights, boundary };
        if model.weights.len() != cols {
            return Err(SpinlatError::MalformedGeometry(format!(
                "expected {cols} weight columns, got {}",
                model.weights.len()
            )));
        }
        for c in 0..cols {
            let expect = model.gates_in_column(c);
            if model.weights[c].len() != expect {
                return Err(SpinlatError::MalformedGeometry(format!(
                    "column {c} expects {expect} vertices, got {}",
                    model.weights[c].len()
                )));
            }
            for t in &model.weights[c] {
                if t.q() != q {
                    return Err(SpinlatError::MalformedGeometry("tensor q mismatch".into()));
                }
            }
        }
        model.boundary.validate(model.wires(), q)?;
        Ok(model)
    }

    /// Same tensor at every vertex.
    pub fn uniform(
        rows: usize,
        cols: usize,
        q: usize,
        tensor: &VertexTensor,
        boundary: BoundaryCondition,
    ) -> Result<Self, SpinlatError> {
        let mut weights = Vec::with_capacity(cols);
        for c in 0..cols {
            let count = {
                let offset = (cols - 1 - c) % 2;
                if offset == 0 {
                    rows
                } else {
                    rows - 1
                }
            };
            weights.push(vec![tensor.clone(); count]);
        }
        Self::new(rows, cols, q, weights, boundary)
    }

    pub fn wires(&self) -> usize {
        2 * self.rows
    }

    /// Brickwork offset of grid column `c`: 0 means pairs `(0,1),(2,3),…`.
    pub fn column_offset(&self, c: usize) -> usize {
        (self.cols - 1 - c) % 2
    }

    pub fn gates_in_column(&self, c: usize) -> usize {
        if self.column_offset(c) == 0 {
            self.rows
        } else {
            self.rows - 1
        }
    }

    /// Top wire of gate `g` in column `c`.
    pub fn gate_top_wire(&self, c: usize, g: usize) -> usize {
        2 * g + self.column_offset(c)
    }

    /// For each wire, the ascending list of columns holding a gate on it.
    pub fn wire_columns(&self) -> Vec<Vec<usize>> {
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); self.wires()];
        for c in 0..self.cols {
            for g in 0..self.gates_in_column(c) {
                let top = self.gate_top_wire(c, g);
                cols[top].push(c);
                cols[top + 1].push(c);
            }
        }
        cols
    }

    /// Flatten into the shared enumeration plan. Spins live on wire segments;
    /// free spins are ordered by (wire, segment left-to-right).
    pub fn oracle_plan(&self) -> Result<OraclePlan, SpinlatError> {
        let wire_columns = self.wire_columns();
        let mut slots: Vec<Vec<Slot>> = Vec::with_capacity(self.wires());
        let mut free = 0usize;
        let mut contradictory = false;
        let (left, right) = match &self.boundary {
            BoundaryCondition::Fixed { left, right } => (Some(left), Some(right)),
            _ => (None, None),
        };
        for (w, cols_on_wire) in wire_columns.iter().enumerate() {
            let p = cols_on_wire.len();
            let mut wire_slots = Vec::with_capacity(p + 1);
            for t in 0..=p {
                let is_left = t == 0;
                let is_right = t == p;
                let slot = match &self.boundary {
                    BoundaryCondition::Fixed { .. } => {
                        let l = left.unwrap()[w];
                        let r = right.unwrap()[w];
                        if is_left && is_right {
                            if l != r {
                                contradictory = true;
                            }
                            Slot::Pinned(l)
                        } else if is_left {
                            Slot::Pinned(l)
                        } else if is_right {
                            Slot::Pinned(r)
                        } else {
                            let s = Slot::Free(free);
                            free += 1;
                            s
                        }
                    }
                    BoundaryCondition::Open => {
                        let s = Slot::Free(free);
                        free += 1;
                        s
                    }
                    BoundaryCondition::Periodic => {
                        if is_right && p > 0 {
                            wire_slots[0]
                        } else {
                            let s = Slot::Free(free);
                            free += 1;
                            s
                        }
                    }
                };
                wire_slots.push(slot);
            }
            slots.push(wire_slots);
        }
        let mut terms = Vec::new();
        for c in 0..self.cols {
            for (g, tensor) in self.weights[c].iter().enumerate() {
                let wu = self.gate_top_wire(c, g);
                let wl = wu + 1;
                let gi_u = wire_columns[wu].binary_search(&c).expect("gate column present");
                let gi_l = wire_columns[wl].binary_search(&c).expect("gate column present");
                terms.push(Term::Quad {
                    i: slots[wu][gi_u],
                    j: slots[wl][gi_l],
                    k: slots[wu][gi_u + 1],
                    l: slots[wl][gi_l + 1],
                    table: tensor.entries().to_vec(),
                });
            }
        }
        Ok(OraclePlan { q: self.q, free, terms, contradictory })
    }
}
