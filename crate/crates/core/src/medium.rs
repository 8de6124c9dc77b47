//! Heterogeneous media: bulk coefficient a(x) with growth exponent p, and
//! anisotropic edge toughness kappa. The bulk density is the power family
//! f(x, xi) = a(x) |xi|^p; toughness encodes g(x, nu) through the axis of
//! each lattice edge.

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid};

/// Per-cell bulk coefficient and per-edge toughness, with declared bounds
/// 0 < alpha <= beta enforced on every entry.
#[derive(Clone, Debug)]
pub struct Medium {
    a: Vec<f64>,
    kappa: Vec<f64>,
    /// Toughness of the boundary ghost face behind each Dirichlet node,
    /// indexed by dirichlet rank.
    kappa_boundary: Vec<f64>,
    p: f64,
    alpha: f64,
    beta: f64,
}

impl Medium {
    pub fn new(
        grid: &Grid,
        a: Vec<f64>,
        kappa: Vec<f64>,
        kappa_boundary: Vec<f64>,
        p: f64,
        alpha: f64,
        beta: f64,
    ) -> Result<Medium> {
        if a.len() != grid.cell_count() {
            return Err(Error::config(format!(
                "bulk coefficient table has {} entries, grid has {} cells",
                a.len(),
                grid.cell_count()
            )));
        }
        if kappa.len() != grid.edge_count() {
            return Err(Error::config(format!(
                "toughness table has {} entries, grid has {} edges",
                kappa.len(),
                grid.edge_count()
            )));
        }
        if kappa_boundary.len() != grid.dirichlet_nodes().len() {
            return Err(Error::config(
                "boundary toughness table length must equal the Dirichlet node count",
            ));
        }
        if !(p >= 1.0) {
            return Err(Error::config(format!(
                "growth exponent p must be >= 1, got {p}"
            )));
        }
        if !(alpha > 0.0 && alpha <= beta) {
            return Err(Error::config(format!(
                "bounds must satisfy 0 < alpha <= beta, got alpha={alpha}, beta={beta}"
            )));
        }
        let m = Medium {
            a,
            kappa,
            kappa_boundary,
            p,
            alpha,
            beta,
        };
        m.check_bounds()?;
        Ok(m)
    }

    /// Homogeneous medium: a == a0, kappa == k0 everywhere.
    pub fn constant(grid: &Grid, a0: f64, k0: f64, p: f64) -> Result<Medium> {
        let lo = a0.min(k0);
        let hi = a0.max(k0);
        Medium::new(
            grid,
            vec![a0; grid.cell_count()],
            vec![k0; grid.edge_count()],
            vec![k0; grid.dirichlet_nodes().len()],
            p,
            lo,
            hi,
        )
    }

    pub fn check_bounds(&self) -> Result<()> {
        for (c, &v) in self.a.iter().enumerate() {
            if !(v >= self.alpha && v <= self.beta) {
                return Err(Error::invariant(format!(
                    "bulk coefficient {v} at cell {c} outside [{}, {}]",
                    self.alpha, self.beta
                )));
            }
        }
        for (e, &v) in self.kappa.iter().enumerate() {
            if !(v >= self.alpha && v <= self.beta) {
                return Err(Error::invariant(format!(
                    "toughness {v} at edge {e} outside [{}, {}]",
                    self.alpha, self.beta
                )));
            }
        }
        for &v in &self.kappa_boundary {
            if !(v >= self.alpha && v <= self.beta) {
                return Err(Error::invariant(format!(
                    "boundary toughness {v} outside [{}, {}]",
                    self.alpha, self.beta
                )));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn a_cell(&self, c: usize) -> f64 {
        self.a[c]
    }

    pub fn a_cells(&self) -> &[f64] {
        &self.a
    }

    pub fn kappa_edge(&self, e: usize) -> f64 {
        self.kappa[e]
    }

    pub fn kappa_boundary(&self, dirichlet_rank: usize) -> f64 {
        self.kappa_boundary[dirichlet_rank]
    }

    /// Bulk coefficient seen by an edge: the mean of its adjacent cells.
    pub fn a_edge(&self, grid: &Grid, e: usize) -> f64 {
        match grid.edge_cells(e) {
            (Some(c0), Some(c1)) => 0.5 * (self.a[c0] + self.a[c1]),
            (Some(c), None) | (None, Some(c)) => self.a[c],
            (None, None) => unreachable!("edge without adjacent cells"),
        }
    }

    /// Rescale the bulk coefficient by c1 and every toughness by c2.
    pub fn scaled(&self, c1: f64, c2: f64) -> Result<Medium> {
        if !(c1 > 0.0 && c2 > 0.0) {
            return Err(Error::config("scaling factors must be positive"));
        }
        Ok(Medium {
            a: self.a.iter().map(|v| c1 * v).collect(),
            kappa: self.kappa.iter().map(|v| c2 * v).collect(),
            kappa_boundary: self.kappa_boundary.iter().map(|v| c2 * v).collect(),
            p: self.p,
            alpha: self.alpha * c1.min(c2),
            beta: self.beta * c1.max(c2),
        })
    }
}

/// Scalar pattern on the unit cell [0,1)^d, evaluated at periodic coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum CellPattern {
    Constant(f64),
    /// Piecewise constant along one axis: value[k] on [boundaries[k], boundaries[k+1])
    /// with an implicit final boundary at 1. `boundaries[0]` must be 0.
    Layered {
        axis: Axis,
        boundaries: Vec<f64>,
        values: Vec<f64>,
    },
    /// 2x2 quadrant checkerboard: values[0] on the quadrants where the two
    /// half-cell parities agree, values[1] elsewhere.
    Checkerboard {
        values: [f64; 2],
    },
    /// Explicit table on an rx x ry sub-grid of the unit cell, row-major.
    Table {
        resolution: [usize; 2],
        values: Vec<f64>,
    },
}

impl CellPattern {
    pub fn validate(&self) -> Result<()> {
        match self {
            CellPattern::Constant(v) => {
                if !(*v > 0.0) {
                    return Err(Error::config("constant pattern value must be positive"));
                }
            }
            CellPattern::Layered {
                boundaries, values, ..
            } => {
                if boundaries.len() != values.len() || boundaries.is_empty() {
                    return Err(Error::config(
                        "layered pattern needs one boundary per value",
                    ));
                }
                if boundaries[0] != 0.0 {
                    return Err(Error::config("layered pattern must start at 0"));
                }
                for w in boundaries.windows(2) {
                    if !(w[0] < w[1]) {
                        return Err(Error::config("layered boundaries must increase"));
                    }
                }
                if *boundaries.last().unwrap() >= 1.0 {
                    return Err(Error::config("layered boundaries must stay below 1"));
                }
                if values.iter().any(|v| !(*v > 0.0)) {
                    return Err(Error::config("layered values must be positive"));
                }
            }
            CellPattern::Checkerboard { values } => {
                if values.iter().any(|v| !(*v > 0.0)) {
                    return Err(Error::config("checkerboard values must be positive"));
                }
            }
            CellPattern::Table { resolution, values } => {
                if resolution[0] == 0 || resolution[1] == 0 {
                    return Err(Error::config("table resolution must be positive"));
                }
                if values.len() != resolution[0] * resolution[1] {
                    return Err(Error::config("table length must match its resolution"));
                }
                if values.iter().any(|v| !(*v > 0.0)) {
                    return Err(Error::config("table values must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Evaluate at a point of the unit cell; coordinates are wrapped into [0,1).
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let u = wrap_unit(x);
        let v = wrap_unit(y);
        match self {
            CellPattern::Constant(c) => *c,
            CellPattern::Layered {
                axis,
                boundaries,
                values,
            } => {
                let t = match axis {
                    Axis::X => u,
                    Axis::Y => v,
                };
                let mut k = 0;
                while k + 1 < boundaries.len() && t >= boundaries[k + 1] {
                    k += 1;
                }
                values[k]
            }
            CellPattern::Checkerboard { values } => {
                let px = u >= 0.5;
                let py = v >= 0.5;
                if px == py {
                    values[0]
                } else {
                    values[1]
                }
            }
            CellPattern::Table { resolution, values } => {
                let i = ((u * resolution[0] as f64) as usize).min(resolution[0] - 1);
                let j = ((v * resolution[1] as f64) as usize).min(resolution[1] - 1);
                values[j * resolution[0] + i]
            }
        }
    }

    pub fn min_value(&self) -> f64 {
        match self {
            CellPattern::Constant(c) => *c,
            CellPattern::Layered { values, .. } => values.iter().cloned().fold(f64::MAX, f64::min),
            CellPattern::Checkerboard { values } => values[0].min(values[1]),
            CellPattern::Table { values, .. } => values.iter().cloned().fold(f64::MAX, f64::min),
        }
    }

    pub fn max_value(&self) -> f64 {
        match self {
            CellPattern::Constant(c) => *c,
            CellPattern::Layered { values, .. } => values.iter().cloned().fold(f64::MIN, f64::max),
            CellPattern::Checkerboard { values } => values[0].max(values[1]),
            CellPattern::Table { values, .. } => values.iter().cloned().fold(f64::MIN, f64::max),
        }
    }

    /// Same pattern with every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> CellPattern {
        match self {
            CellPattern::Constant(v) => CellPattern::Constant(c * v),
            CellPattern::Layered {
                axis,
                boundaries,
                values,
            } => CellPattern::Layered {
                axis: *axis,
                boundaries: boundaries.clone(),
                values: values.iter().map(|v| c * v).collect(),
            },
            CellPattern::Checkerboard { values } => CellPattern::Checkerboard {
                values: [c * values[0], c * values[1]],
            },
            CellPattern::Table { resolution, values } => CellPattern::Table {
                resolution: *resolution,
                values: values.iter().map(|v| c * v).collect(),
            },
        }
    }
}

fn wrap_unit(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// A unit-cell medium replayed at scale epsilon: coefficients at a physical
/// point x come from the pattern at x/epsilon modulo 1.
#[derive(Clone, Debug)]
pub struct PeriodicMedium {
    pub bulk: CellPattern,
    pub toughness: CellPattern,
    /// Multiplies the toughness of edges by axis (normal direction).
    pub toughness_anisotropy: [f64; 2],
    pub epsilon: f64,
    pub p: f64,
}

impl PeriodicMedium {
    pub fn new(
        bulk: CellPattern,
        toughness: CellPattern,
        toughness_anisotropy: [f64; 2],
        epsilon: f64,
        p: f64,
    ) -> Result<PeriodicMedium> {
        if !(epsilon > 0.0) {
            return Err(Error::config(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        bulk.validate()?;
        toughness.validate()?;
        if toughness_anisotropy.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::config(
                "toughness anisotropy factors must be positive",
            ));
        }
        Ok(PeriodicMedium {
            bulk,
            toughness,
            toughness_anisotropy,
            epsilon,
            p,
        })
    }
}

/// Samples a periodic medium onto a grid: bulk at cell centers, toughness at
/// edge midpoints, boundary toughness at Dirichlet node positions.
pub fn sample_periodic(pm: &PeriodicMedium, grid: &Grid) -> Result<Medium> {
    let eps = pm.epsilon;
    let a: Vec<f64> = (0..grid.cell_count())
        .map(|c| {
            let p = grid.cell_center(c);
            pm.bulk.eval(p[0] / eps, p[1] / eps)
        })
        .collect();
    let kappa: Vec<f64> = grid
        .edges()
        .map(|e| {
            let p = grid.edge_midpoint(e);
            let aniso = match grid.edge_axis(e) {
                Axis::X => pm.toughness_anisotropy[0],
                Axis::Y => pm.toughness_anisotropy[1],
            };
            aniso * pm.toughness.eval(p[0] / eps, p[1] / eps)
        })
        .collect();
    let kappa_boundary: Vec<f64> = grid
        .dirichlet_nodes()
        .iter()
        .map(|&n| {
            let p = grid.node_position(n);
            pm.toughness.eval(p[0] / eps, p[1] / eps)
        })
        .collect();
    let aniso_lo = pm.toughness_anisotropy[0]
        .min(pm.toughness_anisotropy[1])
        .min(1.0);
    let aniso_hi = pm.toughness_anisotropy[0]
        .max(pm.toughness_anisotropy[1])
        .max(1.0);
    let alpha = pm.bulk.min_value().min(pm.toughness.min_value() * aniso_lo);
    let beta = pm.bulk.max_value().max(pm.toughness.max_value() * aniso_hi);
    Medium::new(grid, a, kappa, kappa_boundary, pm.p, alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, DirichletSpec};

    #[test]
    fn constant_cell_samples_constant() {
        let g = build_grid(1, &[1.0], &[9], DirichletSpec::Ends).unwrap();
        let pm = PeriodicMedium::new(
            CellPattern::Constant(3.0),
            CellPattern::Constant(2.0),
            [1.0, 1.0],
            0.37,
            2.0,
        )
        .unwrap();
        let m = sample_periodic(&pm, &g).unwrap();
        assert!(m.a_cells().iter().all(|&v| v == 3.0));
        assert!((0..g.edge_count()).all(|e| m.kappa_edge(e) == 2.0));
    }

    #[test]
    fn layered_cell_alternates_in_blocks() {
        // Unit cell: a=1 on [0,1/2), a=4 on [1/2,1); epsilon=0.5 on a grid with
        // h=0.125 gives alternating blocks of width 0.25 (2 cells each).
        let g = build_grid(1, &[1.0], &[9], DirichletSpec::Ends).unwrap();
        let pm = PeriodicMedium::new(
            CellPattern::Layered {
                axis: Axis::X,
                boundaries: vec![0.0, 0.5],
                values: vec![1.0, 4.0],
            },
            CellPattern::Constant(1.0),
            [1.0, 1.0],
            0.5,
            2.0,
        )
        .unwrap();
        let m = sample_periodic(&pm, &g).unwrap();
        assert_eq!(m.a_cells(), &[1.0, 1.0, 4.0, 4.0, 1.0, 1.0, 4.0, 4.0]);
    }

    #[test]
    fn nonpositive_epsilon_rejected() {
        let r = PeriodicMedium::new(
            CellPattern::Constant(1.0),
            CellPattern::Constant(1.0),
            [1.0, 1.0],
            0.0,
            2.0,
        );
        assert!(r.is_err());
    }

    #[test]
    fn bounds_enforced_on_construction() {
        let g = build_grid(1, &[1.0], &[3], DirichletSpec::Ends).unwrap();
        let r = Medium::new(
            &g,
            vec![1.0, 5.0],
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            2.0,
            1.0,
            4.0,
        );
        assert!(r.is_err());
    }

    #[test]
    fn checkerboard_quadrants() {
        let p = CellPattern::Checkerboard { values: [1.0, 4.0] };
        assert_eq!(p.eval(0.25, 0.25), 1.0);
        assert_eq!(p.eval(0.75, 0.75), 1.0);
        assert_eq!(p.eval(0.75, 0.25), 4.0);
        assert_eq!(p.eval(0.25, 0.75), 4.0);
        // periodic wrap
        assert_eq!(p.eval(1.25, -0.75), 1.0);
    }
}
