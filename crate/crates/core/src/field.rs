//! Displacement fields, crack states, energy bookkeeping and boundary data.

use crate::error::{Error, Result};
use crate::grid::{EdgeId, Grid};
use crate::medium::Medium;

/// Nodal scalar field together with the set of open edges across which it may
/// jump without gradient penalty (its admissible discrete jump set).
#[derive(Clone, Debug)]
pub struct ScalarField {
    pub values: Vec<f64>,
    /// Open edges, sorted. The discrete gradient is defined only across
    /// edges not in this set.
    pub open_edges: Vec<EdgeId>,
}

impl ScalarField {
    pub fn new(values: Vec<f64>, mut open_edges: Vec<EdgeId>) -> ScalarField {
        open_edges.sort_unstable();
        open_edges.dedup();
        ScalarField { values, open_edges }
    }

    /// Edges of the open set across which the field actually jumps.
    pub fn jump_edges(&self, grid: &Grid, tol: f64) -> Vec<EdgeId> {
        self.open_edges
            .iter()
            .copied()
            .filter(|&e| {
                let (a, b) = grid.edge_endpoints(e);
                (self.values[b] - self.values[a]).abs() > tol
            })
            .collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Bulk and surface parts of the total configuration energy. The total is
/// always recomputed from the parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyBreakdown {
    pub bulk: f64,
    pub surface: f64,
}

impl EnergyBreakdown {
    pub fn new(bulk: f64, surface: f64) -> EnergyBreakdown {
        EnergyBreakdown { bulk, surface }
    }

    pub fn total(&self) -> f64 {
        self.bulk + self.surface
    }
}

/// Monotone-growing crack: a set of cracked edges plus the Dirichlet boundary
/// nodes where the datum has been released (the boundary part of the jump
/// set). Caches its surface energy; the cache is recomputable exactly.
#[derive(Clone, Debug, Default)]
pub struct CrackState {
    cracked: Vec<bool>,
    cracked_list: Vec<EdgeId>,
    released: Vec<bool>,
    released_list: Vec<usize>,
    surface_energy: f64,
    surface_measure: f64,
}

impl CrackState {
    pub fn empty(grid: &Grid) -> CrackState {
        CrackState {
            cracked: vec![false; grid.edge_count()],
            cracked_list: Vec::new(),
            released: vec![false; grid.dirichlet_nodes().len()],
            released_list: Vec::new(),
            surface_energy: 0.0,
            surface_measure: 0.0,
        }
    }

    pub fn is_cracked(&self, e: EdgeId) -> bool {
        self.cracked[e]
    }

    pub fn is_released(&self, dirichlet_rank: usize) -> bool {
        self.released[dirichlet_rank]
    }

    /// Sorted list of cracked edges.
    pub fn cracked_edges(&self) -> &[EdgeId] {
        &self.cracked_list
    }

    /// Sorted list of released Dirichlet ranks.
    pub fn released_ranks(&self) -> &[usize] {
        &self.released_list
    }

    pub fn n_cracked(&self) -> usize {
        self.cracked_list.len()
    }

    pub fn surface_energy(&self) -> f64 {
        self.surface_energy
    }

    pub fn surface_measure(&self) -> f64 {
        self.surface_measure
    }

    /// Grow the crack. Adding an already-present item is a no-op, so growth
    /// is monotone by construction.
    pub fn grow(&mut self, grid: &Grid, medium: &Medium, edges: &[EdgeId], releases: &[usize]) {
        for &e in edges {
            if !self.cracked[e] {
                self.cracked[e] = true;
                self.cracked_list.push(e);
                self.surface_energy += medium.kappa_edge(e) * grid.edge_surface_measure(e);
                self.surface_measure += grid.edge_surface_measure(e);
            }
        }
        for &r in releases {
            if !self.released[r] {
                self.released[r] = true;
                self.released_list.push(r);
                let node = grid.dirichlet_nodes()[r];
                self.surface_energy += medium.kappa_boundary(r) * grid.node_boundary_measure(node);
                self.surface_measure += grid.node_boundary_measure(node);
            }
        }
        self.cracked_list.sort_unstable();
        self.released_list.sort_unstable();
    }

    pub fn with_growth(
        &self,
        grid: &Grid,
        medium: &Medium,
        edges: &[EdgeId],
        releases: &[usize],
    ) -> CrackState {
        let mut next = self.clone();
        next.grow(grid, medium, edges, releases);
        next
    }

    /// Surface energy recomputed from scratch; must equal the cached value.
    pub fn recompute_surface_energy(&self, grid: &Grid, medium: &Medium) -> f64 {
        let mut s = 0.0;
        for &e in &self.cracked_list {
            s += medium.kappa_edge(e) * grid.edge_surface_measure(e);
        }
        for &r in &self.released_list {
            let node = grid.dirichlet_nodes()[r];
            s += medium.kappa_boundary(r) * grid.node_boundary_measure(node);
        }
        s
    }

    pub fn is_subset_of(&self, other: &CrackState) -> bool {
        self.cracked_list.iter().all(|&e| other.cracked[e])
            && self.released_list.iter().all(|&r| other.released[r])
    }

    /// Verifies the cached surface energy against a recomputation.
    pub fn check_cache(&self, grid: &Grid, medium: &Medium) -> Result<()> {
        let fresh = self.recompute_surface_energy(grid, medium);
        let tol = 1e-12 * (1.0 + fresh.abs());
        if (fresh - self.surface_energy).abs() > tol {
            return Err(Error::invariant(format!(
                "cached surface energy {} differs from recomputed {}",
                self.surface_energy, fresh
            )));
        }
        Ok(())
    }
}

/// Time-dependent boundary datum on the Dirichlet nodes.
#[derive(Clone, Debug)]
pub enum DatumKind {
    /// psi(t, node) = profile[node] * t.
    Ramp { profile: Vec<f64> },
    /// Explicit values per time step, row i holding the datum at times[i].
    Explicit { rows: Vec<Vec<f64>> },
}

#[derive(Clone, Debug)]
pub struct BoundaryDatum {
    pub times: Vec<f64>,
    pub kind: DatumKind,
    /// Declared sup bound on the datum.
    pub bound: f64,
}

impl BoundaryDatum {
    pub fn ramp(times: Vec<f64>, profile: Vec<f64>) -> Result<BoundaryDatum> {
        let t_max = times.iter().cloned().fold(0.0f64, f64::max);
        let p_max = profile.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let datum = BoundaryDatum {
            times,
            kind: DatumKind::Ramp { profile },
            bound: t_max * p_max,
        };
        datum.validate()?;
        Ok(datum)
    }

    pub fn explicit(times: Vec<f64>, rows: Vec<Vec<f64>>, bound: f64) -> Result<BoundaryDatum> {
        let datum = BoundaryDatum {
            times,
            kind: DatumKind::Explicit { rows },
            bound,
        };
        datum.validate()?;
        Ok(datum)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.is_empty() {
            return Err(Error::config("time grid is empty"));
        }
        for w in self.times.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::config("time grid must be strictly increasing"));
            }
        }
        match &self.kind {
            DatumKind::Ramp { profile } => {
                let t_max = self.times.iter().cloned().fold(0.0f64, f64::max);
                let p_max = profile.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if t_max * p_max > self.bound + 1e-12 * (1.0 + self.bound) {
                    return Err(Error::config(format!(
                        "ramp reaches {} and exceeds the declared bound {}",
                        t_max * p_max,
                        self.bound
                    )));
                }
            }
            DatumKind::Explicit { rows } => {
                if rows.len() != self.times.len() {
                    return Err(Error::config("explicit datum needs one row per time"));
                }
                for row in rows {
                    for &v in row {
                        if v.abs() > self.bound + 1e-12 * (1.0 + self.bound) {
                            return Err(Error::config(format!(
                                "datum value {v} exceeds the declared bound {}",
                                self.bound
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        self.times.len()
    }

    /// Datum values on the Dirichlet nodes at step i.
    pub fn values_at(&self, i: usize) -> Vec<f64> {
        match &self.kind {
            DatumKind::Ramp { profile } => {
                let t = self.times[i];
                profile.iter().map(|p| p * t).collect()
            }
            DatumKind::Explicit { rows } => rows[i].clone(),
        }
    }

    /// Datum rate at step i. For ramps this is the profile; otherwise the
    /// backward finite difference (forward at step 0).
    pub fn rate_at(&self, i: usize) -> Vec<f64> {
        match &self.kind {
            DatumKind::Ramp { profile } => profile.clone(),
            DatumKind::Explicit { rows } => {
                let (a, b) = if i == 0 {
                    if rows.len() == 1 {
                        return vec![0.0; rows[0].len()];
                    }
                    (0, 1)
                } else {
                    (i - 1, i)
                };
                let dt = self.times[b] - self.times[a];
                rows[a]
                    .iter()
                    .zip(&rows[b])
                    .map(|(x, y)| (y - x) / dt)
                    .collect()
            }
        }
    }

    pub fn sup_at(&self, i: usize) -> f64 {
        self.values_at(i).iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Uniform time grid 0, delta, 2 delta, ..., T.
pub fn uniform_times(t_end: f64, delta: f64) -> Result<Vec<f64>> {
    if !(t_end > 0.0 && delta > 0.0 && delta <= t_end) {
        return Err(Error::config("need 0 < delta <= t_end"));
    }
    let n = (t_end / delta).round() as usize;
    Ok((0..=n).map(|k| k as f64 * delta).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, DirichletSpec};

    #[test]
    fn crack_growth_is_monotone_and_cached() {
        let g = build_grid(1, &[1.0], &[5], DirichletSpec::Ends).unwrap();
        let m = Medium::constant(&g, 1.0, 2.0, 2.0).unwrap();
        let mut k = CrackState::empty(&g);
        k.grow(&g, &m, &[1], &[]);
        k.grow(&g, &m, &[1, 3], &[0]);
        assert_eq!(k.cracked_edges(), &[1, 3]);
        assert_eq!(k.released_ranks(), &[0]);
        // 2 cracked points of measure 1 each plus a released end, kappa = 2
        assert!((k.surface_energy() - 6.0).abs() < 1e-15);
        k.check_cache(&g, &m).unwrap();
    }

    #[test]
    fn ramp_datum_values_and_rate() {
        let d = BoundaryDatum::ramp(uniform_times(1.0, 0.25).unwrap(), vec![0.0, 1.0]).unwrap();
        assert_eq!(d.n_steps(), 5);
        assert_eq!(d.values_at(2), vec![0.0, 0.5]);
        assert_eq!(d.rate_at(2), vec![0.0, 1.0]);
        assert!((d.bound - 1.0).abs() < 1e-15);
    }

    #[test]
    fn time_grid_must_increase() {
        let r = BoundaryDatum::ramp(vec![0.0, 0.5, 0.5], vec![1.0]);
        assert!(r.is_err());
    }
}
