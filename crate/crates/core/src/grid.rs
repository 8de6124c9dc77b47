//! Discrete geometry: tensor-product grids in 1D and 2D.
//!
//! Displacements live on nodes, bulk coefficients on cells, cracks on edges.
//! Every edge carries an implicit normal direction given by its axis: cutting
//! an edge models a crack surface orthogonal to that edge. The surface measure
//! of an edge is the length of its dual-cell face (clipped at the domain
//! boundary), so discrete surface energies agree with the Hausdorff measure of
//! axis-aligned cracks.

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type CellId = usize;
pub type EdgeId = usize;

/// Axis of an edge; also the normal direction of the crack surface the edge
/// represents when cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Selects which boundary nodes carry the Dirichlet datum.
#[derive(Clone, Debug, PartialEq)]
pub enum DirichletSpec {
    /// Both endpoints of a 1D bar.
    Ends,
    /// Bottom and top rows of a 2D grid.
    BottomTop,
    /// Left and right columns of a 2D grid.
    LeftRight,
    /// Explicit node indices (must lie on the boundary).
    Nodes(Vec<NodeId>),
    /// No Dirichlet nodes (legal, but an evolution run will warn).
    Empty,
}

/// Uniform tensor-product grid. `counts[1] == 1` in one dimension.
#[derive(Clone, Debug)]
pub struct Grid {
    dim: usize,
    counts: [usize; 2],
    extents: [f64; 2],
    spacing: [f64; 2],
    /// Sorted Dirichlet node ids.
    dirichlet: Vec<NodeId>,
    /// dirichlet_rank[node] = Some(index into `dirichlet`).
    dirichlet_rank: Vec<Option<usize>>,
}

/// Builds a grid, validating extents and node counts.
pub fn build_grid(
    dim: usize,
    extents: &[f64],
    counts: &[usize],
    dirichlet: DirichletSpec,
) -> Result<Grid> {
    Grid::new(dim, extents, counts, dirichlet)
}

impl Grid {
    pub fn new(
        dim: usize,
        extents: &[f64],
        counts: &[usize],
        dirichlet: DirichletSpec,
    ) -> Result<Grid> {
        if dim != 1 && dim != 2 {
            return Err(Error::config(format!(
                "dimension must be 1 or 2, got {dim}"
            )));
        }
        if extents.len() != dim || counts.len() != dim {
            return Err(Error::config("extents/counts length must equal dimension"));
        }
        let mut c = [1usize; 2];
        let mut e = [0.0f64; 2];
        for k in 0..dim {
            if counts[k] < 2 {
                return Err(Error::config(format!(
                    "axis {k}: need at least 2 nodes, got {}",
                    counts[k]
                )));
            }
            if !(extents[k] > 0.0) || !extents[k].is_finite() {
                return Err(Error::config(format!(
                    "axis {k}: extent must be positive and finite, got {}",
                    extents[k]
                )));
            }
            c[k] = counts[k];
            e[k] = extents[k];
        }
        let mut spacing = [0.0f64; 2];
        for k in 0..dim {
            spacing[k] = e[k] / (c[k] - 1) as f64;
        }
        let mut grid = Grid {
            dim,
            counts: c,
            extents: e,
            spacing,
            dirichlet: Vec::new(),
            dirichlet_rank: Vec::new(),
        };
        grid.dirichlet = grid.resolve_dirichlet(&dirichlet)?;
        grid.dirichlet_rank = vec![None; grid.node_count()];
        for (r, &n) in grid.dirichlet.iter().enumerate() {
            grid.dirichlet_rank[n] = Some(r);
        }
        Ok(grid)
    }

    fn resolve_dirichlet(&self, spec: &DirichletSpec) -> Result<Vec<NodeId>> {
        let (nx, ny) = (self.counts[0], self.counts[1]);
        let mut nodes = match spec {
            DirichletSpec::Empty => Vec::new(),
            DirichletSpec::Ends => {
                if self.dim != 1 {
                    return Err(Error::config("dirichlet 'ends' requires a 1D grid"));
                }
                vec![0, nx - 1]
            }
            DirichletSpec::BottomTop => {
                if self.dim != 2 {
                    return Err(Error::config("dirichlet 'bottom-top' requires a 2D grid"));
                }
                let mut v: Vec<NodeId> = (0..nx).collect();
                v.extend((0..nx).map(|i| (ny - 1) * nx + i));
                v
            }
            DirichletSpec::LeftRight => {
                if self.dim != 2 {
                    return Err(Error::config("dirichlet 'left-right' requires a 2D grid"));
                }
                let mut v: Vec<NodeId> = (0..ny).map(|j| j * nx).collect();
                v.extend((0..ny).map(|j| j * nx + nx - 1));
                v
            }
            DirichletSpec::Nodes(v) => v.clone(),
        };
        nodes.sort_unstable();
        nodes.dedup();
        for &n in &nodes {
            if n >= self.node_count() {
                return Err(Error::config(format!("dirichlet node {n} out of range")));
            }
            if !self.is_boundary_node(n) {
                return Err(Error::config(format!(
                    "dirichlet node {n} is not a boundary node"
                )));
            }
        }
        Ok(nodes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn counts(&self) -> [usize; 2] {
        self.counts
    }

    pub fn extents(&self) -> [f64; 2] {
        self.extents
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.spacing[0],
            Axis::Y => self.spacing[1],
        }
    }

    pub fn node_count(&self) -> usize {
        self.counts[0] * self.counts[1]
    }

    pub fn cell_count(&self) -> usize {
        if self.dim == 1 {
            self.counts[0] - 1
        } else {
            (self.counts[0] - 1) * (self.counts[1] - 1)
        }
    }

    pub fn x_edge_count(&self) -> usize {
        (self.counts[0] - 1) * self.counts[1]
    }

    pub fn y_edge_count(&self) -> usize {
        if self.dim == 1 {
            0
        } else {
            self.counts[0] * (self.counts[1] - 1)
        }
    }

    pub fn edge_count(&self) -> usize {
        self.x_edge_count() + self.y_edge_count()
    }

    pub fn node_id(&self, i: usize, j: usize) -> NodeId {
        j * self.counts[0] + i
    }

    pub fn node_coords(&self, n: NodeId) -> (usize, usize) {
        (n % self.counts[0], n / self.counts[0])
    }

    pub fn node_position(&self, n: NodeId) -> [f64; 2] {
        let (i, j) = self.node_coords(n);
        [i as f64 * self.spacing[0], j as f64 * self.spacing[1]]
    }

    pub fn is_boundary_node(&self, n: NodeId) -> bool {
        let (i, j) = self.node_coords(n);
        if self.dim == 1 {
            i == 0 || i == self.counts[0] - 1
        } else {
            i == 0 || i == self.counts[0] - 1 || j == 0 || j == self.counts[1] - 1
        }
    }

    /// x-edges come first (ordered by row, then column), then y-edges.
    pub fn x_edge_id(&self, i: usize, j: usize) -> EdgeId {
        debug_assert!(i < self.counts[0] - 1 && j < self.counts[1]);
        j * (self.counts[0] - 1) + i
    }

    pub fn y_edge_id(&self, i: usize, j: usize) -> EdgeId {
        debug_assert!(i < self.counts[0] && j < self.counts[1] - 1);
        self.x_edge_count() + j * self.counts[0] + i
    }

    pub fn edge_axis(&self, e: EdgeId) -> Axis {
        if e < self.x_edge_count() {
            Axis::X
        } else {
            Axis::Y
        }
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        let nx = self.counts[0];
        if e < self.x_edge_count() {
            let j = e / (nx - 1);
            let i = e % (nx - 1);
            (self.node_id(i, j), self.node_id(i + 1, j))
        } else {
            let r = e - self.x_edge_count();
            let j = r / nx;
            let i = r % nx;
            (self.node_id(i, j), self.node_id(i, j + 1))
        }
    }

    pub fn edge_midpoint(&self, e: EdgeId) -> [f64; 2] {
        let (a, b) = self.edge_endpoints(e);
        let pa = self.node_position(a);
        let pb = self.node_position(b);
        [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]
    }

    /// Cells adjacent to an edge. A 1D edge coincides with its cell. In 2D an
    /// x-edge separates the cells below and above it, a y-edge the cells left
    /// and right of it; `None` marks the domain boundary.
    pub fn edge_cells(&self, e: EdgeId) -> (Option<CellId>, Option<CellId>) {
        let nx = self.counts[0];
        let ny = self.counts[1];
        if self.dim == 1 {
            return (Some(e), None);
        }
        let cw = nx - 1;
        if e < self.x_edge_count() {
            let j = e / cw;
            let i = e % cw;
            let below = if j > 0 { Some((j - 1) * cw + i) } else { None };
            let above = if j < ny - 1 { Some(j * cw + i) } else { None };
            (below, above)
        } else {
            let r = e - self.x_edge_count();
            let j = r / nx;
            let i = r % nx;
            let left = if i > 0 { Some(j * cw + i - 1) } else { None };
            let right = if i < nx - 1 { Some(j * cw + i) } else { None };
            (left, right)
        }
    }

    pub fn cell_center(&self, c: CellId) -> [f64; 2] {
        if self.dim == 1 {
            [(c as f64 + 0.5) * self.spacing[0], 0.0]
        } else {
            let cw = self.counts[0] - 1;
            let i = c % cw;
            let j = c / cw;
            [
                (i as f64 + 0.5) * self.spacing[0],
                (j as f64 + 0.5) * self.spacing[1],
            ]
        }
    }

    /// Surface measure of the crack piece an edge represents: the dual-cell
    /// face length, halved where the dual cell is clipped by the boundary.
    /// In 1D a crack point has measure 1.
    pub fn edge_surface_measure(&self, e: EdgeId) -> f64 {
        if self.dim == 1 {
            return 1.0;
        }
        let (c0, c1) = self.edge_cells(e);
        let full = match self.edge_axis(e) {
            Axis::X => self.spacing[1],
            Axis::Y => self.spacing[0],
        };
        if c0.is_some() && c1.is_some() {
            full
        } else {
            0.5 * full
        }
    }

    /// Volume weight of an edge in the bulk quadrature. Summing over all
    /// edges of one axis reproduces the domain volume (trapezoid rule).
    pub fn edge_bulk_volume(&self, e: EdgeId) -> f64 {
        if self.dim == 1 {
            return self.spacing[0];
        }
        let (c0, c1) = self.edge_cells(e);
        let full = self.spacing[0] * self.spacing[1];
        if c0.is_some() && c1.is_some() {
            full
        } else {
            0.5 * full
        }
    }

    /// Length of the edge itself (the denominator of its difference quotient).
    pub fn edge_length(&self, e: EdgeId) -> f64 {
        match self.edge_axis(e) {
            Axis::X => self.spacing[0],
            Axis::Y => self.spacing[1],
        }
    }

    pub fn dirichlet_nodes(&self) -> &[NodeId] {
        &self.dirichlet
    }

    pub fn dirichlet_rank(&self, n: NodeId) -> Option<usize> {
        self.dirichlet_rank.get(n).copied().flatten()
    }

    /// Boundary-face measure attached to a Dirichlet node: the share of the
    /// boundary its ghost edge represents when the datum is violated there.
    /// In 1D this is the unit point measure.
    pub fn node_boundary_measure(&self, n: NodeId) -> f64 {
        debug_assert!(self.is_boundary_node(n));
        if self.dim == 1 {
            return 1.0;
        }
        let (i, j) = self.node_coords(n);
        let nx = self.counts[0];
        let ny = self.counts[1];
        // A corner node sits on two faces; its dual face share on either is h/2.
        let on_x_face = j == 0 || j == ny - 1;
        let h = if on_x_face {
            self.spacing[0]
        } else {
            self.spacing[1]
        };
        let interior_along = if on_x_face {
            i > 0 && i < nx - 1
        } else {
            j > 0 && j < ny - 1
        };
        if interior_along {
            h
        } else {
            0.5 * h
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        0..self.edge_count()
    }
}
