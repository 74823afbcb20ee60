//! Planar circuit graphs: an `n×m` rectangular grid with a subset of vertical
//! edges deleted and a subset of horizontal edges contracted.
//!
//! This is the graph family on which the Ising construction lives. The derived
//! vertex and edge lists are computed once from the grid description; the
//! horizontal edge count τ is always taken from the final graph, never from
//! the grid.

use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed geometry: {0}")]
    MalformedGeometry(String),
}

/// One merged vertex: a maximal run of contracted grid cells in a single row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcgVertex {
    pub row: usize,
    pub col_start: usize,
    pub col_end: usize,
}

/// Horizontal edge between two consecutive vertices of a row. Spans grid
/// columns (`col`, `col+1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizontalEdge {
    pub left: usize,
    pub right: usize,
    pub row: usize,
    pub col: usize,
}

/// Vertical edge between the row-`row` and row-`row+1` vertices at `col`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalEdge {
    pub top: usize,
    pub bottom: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub struct PlanarCircuitGraph {
    n: usize,
    m: usize,
    deleted_vertical: BTreeSet<(usize, usize)>,
    contracted_horizontal: BTreeSet<(usize, usize)>,
    vertices: Vec<PcgVertex>,
    vertex_at: Vec<Vec<usize>>,
    horizontal_edges: Vec<HorizontalEdge>,
    vertical_edges: Vec<VerticalEdge>,
}

impl PlanarCircuitGraph {
    /// Build from the grid description. `deleted_vertical` holds `(row, col)`
    /// for the removed edge between `(row, col)` and `(row+1, col)`;
    /// `contracted_horizontal` holds `(row, col)` for the contracted edge
    /// between `(row, col)` and `(row, col+1)`.
    #[allow(clippy::needless_range_loop)]
    pub fn new(
        n: usize,
        m: usize,
        deleted_vertical: BTreeSet<(usize, usize)>,
        contracted_horizontal: BTreeSet<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        if n == 0 || m == 0 {
            return Err(GraphError::MalformedGeometry("grid must be at least 1x1".into()));
        }
        for &(r, c) in &deleted_vertical {
            if r + 1 >= n || c >= m {
                return Err(GraphError::MalformedGeometry(format!(
                    "deleted vertical edge ({r},{c}) outside {n}x{m} grid"
                )));
            }
        }
        for &(r, c) in &contracted_horizontal {
            if r >= n || c + 1 >= m {
                return Err(GraphError::MalformedGeometry(format!(
                    "contracted horizontal edge ({r},{c}) outside {n}x{m} grid"
                )));
            }
        }

        let mut vertices = Vec::new();
        let mut vertex_at = vec![vec![usize::MAX; m]; n];
        let mut horizontal_edges = Vec::new();
        for row in 0..n {
            let mut start = 0usize;
            for col in 0..m {
                vertex_at[row][col] = vertices.len();
                let contract_next = col + 1 < m && contracted_horizontal.contains(&(row, col));
                if !contract_next {
                    vertices.push(PcgVertex { row, col_start: start, col_end: col });
                    start = col + 1;
                }
            }
        }
        for row in 0..n {
            for col in 0..m.saturating_sub(1) {
                if !contracted_horizontal.contains(&(row, col)) {
                    horizontal_edges.push(HorizontalEdge {
                        left: vertex_at[row][col],
                        right: vertex_at[row][col + 1],
                        row,
                        col,
                    });
                }
            }
        }
        let mut vertical_edges = Vec::new();
        for row in 0..n.saturating_sub(1) {
            for col in 0..m {
                if !deleted_vertical.contains(&(row, col)) {
                    vertical_edges.push(VerticalEdge {
                        top: vertex_at[row][col],
                        bottom: vertex_at[row + 1][col],
                        row,
                        col,
                    });
                }
            }
        }
        Ok(PlanarCircuitGraph {
            n,
            m,
            deleted_vertical,
            contracted_horizontal,
            vertices,
            vertex_at,
            horizontal_edges,
            vertical_edges,
        })
    }

    /// Full `n×m` grid: nothing deleted, nothing contracted.
    pub fn full_grid(n: usize, m: usize) -> Result<Self, GraphError> {
        Self::new(n, m, BTreeSet::new(), BTreeSet::new())
    }

    /// Vertical dimension (number of rows / circuit wires).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Horizontal extent of the originating grid.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn deleted_vertical(&self) -> &BTreeSet<(usize, usize)> {
        &self.deleted_vertical
    }

    pub fn contracted_horizontal(&self) -> &BTreeSet<(usize, usize)> {
        &self.contracted_horizontal
    }

    pub fn vertices(&self) -> &[PcgVertex] {
        &self.vertices
    }

    pub fn vertex_at(&self, row: usize, col: usize) -> usize {
        self.vertex_at[row][col]
    }

    pub fn horizontal_edges(&self) -> &[HorizontalEdge] {
        &self.horizontal_edges
    }

    pub fn vertical_edges(&self) -> &[VerticalEdge] {
        &self.vertical_edges
    }

    /// τ, recomputed from the final graph.
    pub fn tau(&self) -> usize {
        self.horizontal_edges.len()
    }

    /// Leftmost vertex of each row (the left boundary spins, top to bottom).
    pub fn left_boundary(&self) -> Vec<usize> {
        (0..self.n).map(|r| self.vertex_at[r][0]).collect()
    }

    /// Rightmost vertex of each row.
    pub fn right_boundary(&self) -> Vec<usize> {
        (0..self.n).map(|r| self.vertex_at[r][self.m - 1]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_grid_counts() {
        let g = PlanarCircuitGraph::full_grid(3, 4).unwrap();
        assert_eq!(g.vertices().len(), 12);
        assert_eq!(g.tau(), 3 * 3);
        assert_eq!(g.vertical_edges().len(), 2 * 4);
    }

    #[test]
    fn contraction_merges_vertices_and_drops_edges() {
        let contracted: BTreeSet<_> = [(0usize, 0usize), (0, 1)].into_iter().collect();
        let g = PlanarCircuitGraph::new(2, 3, BTreeSet::new(), contracted).unwrap();
        // Row 0 collapses to one vertex spanning all three columns.
        assert_eq!(g.vertex_at(0, 0), g.vertex_at(0, 2));
        assert_eq!(g.vertices().len(), 1 + 3);
        assert_eq!(g.tau(), 2); // only row 1 keeps its horizontal edges
        // Vertical edges attach the merged vertex to each row-1 vertex.
        assert_eq!(g.vertical_edges().len(), 3);
        for e in g.vertical_edges() {
            assert_eq!(e.top, g.vertex_at(0, 0));
        }
    }

    #[test]
    fn deletion_removes_vertical_edges() {
        let deleted: BTreeSet<_> = [(0usize, 1usize)].into_iter().collect();
        let g = PlanarCircuitGraph::new(2, 3, deleted, BTreeSet::new()).unwrap();
        assert_eq!(g.vertical_edges().len(), 2);
        assert!(g.vertical_edges().iter().all(|e| e.col != 1));
    }

    #[test]
    fn out_of_range_edits_are_rejected() {
        let deleted: BTreeSet<_> = [(1usize, 0usize)].into_iter().collect();
        assert!(PlanarCircuitGraph::new(2, 3, deleted, BTreeSet::new()).is_err());
        let contracted: BTreeSet<_> = [(0usize, 2usize)].into_iter().collect();
        assert!(PlanarCircuitGraph::new(2, 3, BTreeSet::new(), contracted).is_err());
    }
}
