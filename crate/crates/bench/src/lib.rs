//! Shared fixtures for the criterion benchmarks.

use homfrac::field::CrackState;
use homfrac::grid::{build_grid, DirichletSpec, EdgeId, Grid};
use homfrac::medium::Medium;

/// 2D grid with the bottom and top rows carrying the datum.
pub fn fixture_grid(nodes: usize) -> Grid {
    build_grid(2, &[1.0, 1.0], &[nodes, nodes], DirichletSpec::BottomTop).unwrap()
}

/// Deterministic heterogeneous medium with contrast 4.
pub fn fixture_medium(grid: &Grid) -> Medium {
    let a: Vec<f64> = (0..grid.cell_count())
        .map(|c| 1.0 + 3.0 * (((c * 2654435761) % 997) as f64 / 996.0))
        .collect();
    let kappa: Vec<f64> = (0..grid.edge_count())
        .map(|e| 1.0 + 3.0 * (((e * 40503) % 991) as f64 / 990.0))
        .collect();
    let kb = vec![2.0; grid.dirichlet_nodes().len()];
    Medium::new(grid, a, kappa, kb, 2.0, 1.0, 4.0).unwrap()
}

pub fn empty_crack(grid: &Grid) -> CrackState {
    CrackState::empty(grid)
}

/// Pull-apart datum values at load t.
pub fn fixture_datum(grid: &Grid, t: f64) -> Vec<f64> {
    let top = grid.counts()[1] - 1;
    grid.dirichlet_nodes()
        .iter()
        .map(|&n| if grid.node_coords(n).1 == top { t } else { 0.0 })
        .collect()
}

/// A sparse crack pattern for discounted-cut benchmarks.
pub fn fixture_discount(grid: &Grid) -> Vec<EdgeId> {
    (0..grid.edge_count()).filter(|e| e % 37 == 0).collect()
}
