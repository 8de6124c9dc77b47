//! Bulk minimization at a fixed crack: minimize the discrete energy
//! sum_e a(e) |du/h|^p vol(e) over fields attaining the datum on the
//! non-released Dirichlet nodes, with free jumps across cracked edges.
//!
//! p = 2 is a single direct sparse solve of the weighted graph Laplacian with
//! cracked edges removed. General p > 1 runs damped Newton on the convex
//! energy, reusing the symbolic factorization across iterations. Connected
//! components that carry no datum node take a prescribed constant.

use crate::error::{Error, Result};
use crate::field::{CrackState, ScalarField};
use crate::grid::{Axis, EdgeId, Grid, NodeId};
use crate::medium::Medium;
use crate::sparse::{nd_order_grid, restrict_order, CholFactor, SpdGraphPattern};

/// How components without any datum node pick their constant.
#[derive(Clone, Debug)]
pub enum FloatingRule {
    Zero,
    /// Mean of the given previous field over the component.
    MeanOf(Vec<f64>),
}

/// Newton stopping tolerance on the Euclidean norm of the energy gradient
/// over free nodes, for p != 2.
const NEWTON_GRAD_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 200;

#[derive(Clone, Debug)]
struct ActiveEdge {
    id: EdgeId,
    a: NodeId,
    b: NodeId,
    /// Energy coefficient: a(e) * vol(e) / h^p, so the edge contributes
    /// coeff * |u_b - u_a|^p.
    coeff: f64,
}

/// Elastic problem bound to one (grid, medium, crack) triple. Solving for
/// several data (the datum itself, then its rate for the work integrand)
/// reuses the factorization.
pub struct ElasticSystem<'a> {
    grid: &'a Grid,
    medium: &'a Medium,
    active: Vec<ActiveEdge>,
    /// node -> compact index among anchored free nodes
    free_index: Vec<Option<u32>>,
    free_nodes: Vec<NodeId>,
    /// node -> dirichlet rank if pinned (not released)
    pinned_rank: Vec<Option<usize>>,
    /// free-free couplings, indices into `active`
    ff_edges: Vec<usize>,
    /// (free compact idx, dirichlet rank, active idx) for free-pinned couplings
    fp_edges: Vec<(u32, usize, usize)>,
    /// open (cracked) edges, for labelling solutions
    open_edges: Vec<EdgeId>,
    /// nodes of each floating component
    floating: Vec<Vec<NodeId>>,
    pattern: SpdGraphPattern,
    /// quadratic factor, present when p == 2
    factor: Option<CholFactor>,
}

/// Minimizer of the bulk energy together with its value and diagnostics.
#[derive(Clone, Debug)]
pub struct ElasticSolution {
    pub field: ScalarField,
    pub bulk_energy: f64,
    /// Cell-averaged gradient, [g, 0] in 1D.
    pub cell_gradients: Vec<[f64; 2]>,
    /// Euclidean norm of the energy gradient over free nodes at the solution.
    pub grad_norm: f64,
}

struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = x;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, keeps the labelling deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

impl<'a> ElasticSystem<'a> {
    pub fn build(
        grid: &'a Grid,
        medium: &'a Medium,
        crack: &CrackState,
    ) -> Result<ElasticSystem<'a>> {
        let p = medium.p();
        if p != 2.0 && !(p > 1.0) {
            return Err(Error::numerical(format!(
                "elastic solver requires p > 1, got p = {p}"
            )));
        }
        let n = grid.node_count();

        let mut pinned_rank: Vec<Option<usize>> = vec![None; n];
        for (rank, &node) in grid.dirichlet_nodes().iter().enumerate() {
            if !crack.is_released(rank) {
                pinned_rank[node] = Some(rank);
            }
        }

        let mut active = Vec::with_capacity(grid.edge_count());
        let mut open_edges = Vec::new();
        for e in grid.edges() {
            if crack.is_cracked(e) {
                open_edges.push(e);
                continue;
            }
            let (a, b) = grid.edge_endpoints(e);
            let h = grid.edge_length(e);
            let coeff = medium.a_edge(grid, e) * grid.edge_bulk_volume(e) / h.powf(p);
            active.push(ActiveEdge { id: e, a, b, coeff });
        }

        let mut dsu = Dsu::new(n);
        for ae in &active {
            dsu.union(ae.a as u32, ae.b as u32);
        }
        let mut root_anchored = vec![false; n];
        for node in 0..n {
            if pinned_rank[node].is_some() {
                let r = dsu.find(node as u32) as usize;
                root_anchored[r] = true;
            }
        }

        let mut free_index: Vec<Option<u32>> = vec![None; n];
        let mut free_nodes = Vec::new();
        let mut floating_map: std::collections::BTreeMap<u32, Vec<NodeId>> =
            std::collections::BTreeMap::new();
        for node in 0..n {
            if pinned_rank[node].is_some() {
                continue;
            }
            let r = dsu.find(node as u32);
            if root_anchored[r as usize] {
                free_index[node] = Some(free_nodes.len() as u32);
                free_nodes.push(node);
            } else {
                floating_map.entry(r).or_default().push(node);
            }
        }
        let floating: Vec<Vec<NodeId>> = floating_map.into_values().collect();

        let mut ff_edges = Vec::new();
        let mut fp_edges = Vec::new();
        let mut pattern_edges: Vec<(u32, u32)> = Vec::new();
        for (idx, ae) in active.iter().enumerate() {
            match (free_index[ae.a], free_index[ae.b]) {
                (Some(fa), Some(fb)) => {
                    ff_edges.push(idx);
                    pattern_edges.push((fa, fb));
                }
                (Some(fa), None) => {
                    if let Some(rank) = pinned_rank[ae.b] {
                        fp_edges.push((fa, rank, idx));
                    }
                }
                (None, Some(fb)) => {
                    if let Some(rank) = pinned_rank[ae.a] {
                        fp_edges.push((fb, rank, idx));
                    }
                }
                // pinned-pinned edges enter the energy directly; edges inside
                // a floating component carry zero gradient at the optimum
                (None, None) => {}
            }
        }

        let counts = grid.counts();
        let full_order = nd_order_grid(counts[0], counts[1]);
        let order = restrict_order(&full_order, &free_index, free_nodes.len());
        let pattern = SpdGraphPattern::new(free_nodes.len(), pattern_edges, order)?;

        let mut sys = ElasticSystem {
            grid,
            medium,
            active,
            free_index,
            free_nodes,
            pinned_rank,
            ff_edges,
            fp_edges,
            open_edges,
            floating,
            pattern,
            factor: None,
        };
        if p == 2.0 {
            let (w, d) = sys.quadratic_weights();
            sys.factor = Some(sys.pattern.factor(&w, &d)?);
        }
        Ok(sys)
    }

    /// Edge weights and extra diagonal for the p = 2 system.
    fn quadratic_weights(&self) -> (Vec<f64>, Vec<f64>) {
        let w: Vec<f64> = self
            .ff_edges
            .iter()
            .map(|&i| self.active[i].coeff)
            .collect();
        let mut d = vec![0.0f64; self.free_nodes.len()];
        for &(f, _, idx) in &self.fp_edges {
            d[f as usize] += self.active[idx].coeff;
        }
        (w, d)
    }

    pub fn n_free(&self) -> usize {
        self.free_nodes.len()
    }

    /// Assembles the full nodal field from free values, pinned datum values
    /// and floating constants.
    fn assemble_field(
        &self,
        free_vals: &[f64],
        datum: &[f64],
        floating_rule: &FloatingRule,
        clamp: Option<f64>,
    ) -> Vec<f64> {
        let n = self.grid.node_count();
        let mut u = vec![0.0f64; n];
        for node in 0..n {
            if let Some(rank) = self.pinned_rank[node] {
                u[node] = datum[rank];
            } else if let Some(f) = self.free_index[node] {
                u[node] = free_vals[f as usize];
            }
        }
        for comp in &self.floating {
            let value = match floating_rule {
                FloatingRule::Zero => 0.0,
                FloatingRule::MeanOf(prev) => {
                    comp.iter().map(|&nd| prev[nd]).sum::<f64>() / comp.len() as f64
                }
            };
            for &nd in comp {
                u[nd] = value;
            }
        }
        if let Some(c) = clamp {
            for v in u.iter_mut() {
                *v = v.clamp(-c, c);
            }
        }
        u
    }

    fn energy_of(&self, u: &[f64]) -> f64 {
        let p = self.medium.p();
        let mut e = 0.0;
        if p == 2.0 {
            for ae in &self.active {
                let d = u[ae.b] - u[ae.a];
                e += ae.coeff * d * d;
            }
        } else {
            for ae in &self.active {
                let d = (u[ae.b] - u[ae.a]).abs();
                e += ae.coeff * d.powf(p);
            }
        }
        e
    }

    /// Energy gradient restricted to free nodes.
    fn gradient_of(&self, u: &[f64]) -> Vec<f64> {
        let p = self.medium.p();
        let mut g = vec![0.0f64; self.free_nodes.len()];
        for ae in &self.active {
            let d = u[ae.b] - u[ae.a];
            let t = if p == 2.0 {
                2.0 * ae.coeff * d
            } else {
                p * ae.coeff * d.abs().powf(p - 1.0) * d.signum()
            };
            if let Some(f) = self.free_index[ae.b] {
                g[f as usize] += t;
            }
            if let Some(f) = self.free_index[ae.a] {
                g[f as usize] -= t;
            }
        }
        g
    }

    /// Solves the bulk minimization for the given datum values (one per
    /// Dirichlet rank; released ranks are ignored).
    pub fn solve(&self, datum: &[f64], floating_rule: &FloatingRule) -> Result<ElasticSolution> {
        assert_eq!(datum.len(), self.grid.dirichlet_nodes().len());
        let sup_psi = datum.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let p = self.medium.p();
        let free_vals = if p == 2.0 {
            let mut b = vec![0.0f64; self.free_nodes.len()];
            for &(f, rank, idx) in &self.fp_edges {
                b[f as usize] += self.active[idx].coeff * datum[rank];
            }
            self.pattern.solve(self.factor.as_ref().unwrap(), &b)
        } else {
            self.newton_solve(datum)?
        };
        let u = self.assemble_field(&free_vals, datum, floating_rule, Some(sup_psi));
        let bulk_energy = self.energy_of(&u);
        let grad = self.gradient_of(&u);
        let grad_norm = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        let field = ScalarField::new(u, self.open_edges.clone());
        Ok(ElasticSolution {
            cell_gradients: self.cell_gradients(&field.values),
            field,
            bulk_energy,
            grad_norm,
        })
    }

    fn newton_solve(&self, datum: &[f64]) -> Result<Vec<f64>> {
        let p = self.medium.p();
        let nf = self.free_nodes.len();
        if nf == 0 {
            return Ok(Vec::new());
        }
        // start from the harmonic solution
        let (w2, d2) = self.quadratic_weights();
        let f2 = self.pattern.factor(&w2, &d2)?;
        let mut b = vec![0.0f64; nf];
        for &(f, rank, idx) in &self.fp_edges {
            b[f as usize] += self.active[idx].coeff * datum[rank];
        }
        let mut free_vals = self.pattern.solve(&f2, &b);
        let mut u = self.assemble_field(&free_vals, datum, &FloatingRule::Zero, None);

        let scale = datum.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let diff_floor = 1e-12 * scale;
        let mut energy = self.energy_of(&u);
        for _iter in 0..NEWTON_MAX_ITER {
            let grad = self.gradient_of(&u);
            let gn = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gn <= NEWTON_GRAD_TOL {
                return Ok(free_vals);
            }
            // Hessian weights per edge, clamped away from zero difference
            let hw = |idx: usize| -> f64 {
                let ae = &self.active[idx];
                let d = (u[ae.b] - u[ae.a]).abs().max(diff_floor);
                p * (p - 1.0) * ae.coeff * d.powf(p - 2.0)
            };
            let w: Vec<f64> = self.ff_edges.iter().map(|&i| hw(i)).collect();
            let mut dd = vec![0.0f64; nf];
            for &(f, _, idx) in &self.fp_edges {
                dd[f as usize] += hw(idx);
            }
            let fac = self.pattern.factor(&w, &dd)?;
            let step = self.pattern.solve(&fac, &grad);
            // backtracking line search on the energy
            let descent: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let trial: Vec<f64> = free_vals
                    .iter()
                    .zip(&step)
                    .map(|(v, s)| v - t * s)
                    .collect();
                let ut = self.assemble_field(&trial, datum, &FloatingRule::Zero, None);
                let et = self.energy_of(&ut);
                if et <= energy - 1e-4 * t * descent {
                    free_vals = trial;
                    u = ut;
                    energy = et;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                if gn <= 1e2 * NEWTON_GRAD_TOL {
                    return Ok(free_vals);
                }
                return Err(Error::numerical(format!(
                    "newton line search stagnated, |grad| = {gn:.3e}"
                )));
            }
        }
        let grad = self.gradient_of(&u);
        let gn = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        Err(Error::numerical(format!(
            "newton did not reach |grad| <= {NEWTON_GRAD_TOL:.0e} in {NEWTON_MAX_ITER} iterations \
             (|grad| = {gn:.3e})"
        )))
    }

    /// Work integrand theta = sum_e a p |du/h|^{p-2} (du/h) (dr/h) vol(e),
    /// where r is the energy-minimal extension of the datum rate with the
    /// same crack. The value does not depend on the extension because the
    /// energy gradient vanishes at free nodes; the energy-minimal lifting is
    /// used to keep the computation deterministic.
    pub fn work_integrand(&self, sol: &ElasticSolution, rate: &[f64]) -> Result<f64> {
        assert_eq!(rate.len(), self.grid.dirichlet_nodes().len());
        let p = self.medium.p();
        let r_free = if p == 2.0 {
            let mut b = vec![0.0f64; self.free_nodes.len()];
            for &(f, rank, idx) in &self.fp_edges {
                b[f as usize] += self.active[idx].coeff * rate[rank];
            }
            self.pattern.solve(self.factor.as_ref().unwrap(), &b)
        } else {
            self.newton_solve(rate)?
        };
        let r = self.assemble_field(&r_free, rate, &FloatingRule::Zero, None);
        let u = &sol.field.values;
        let mut theta = 0.0;
        for ae in &self.active {
            let du = u[ae.b] - u[ae.a];
            let dr = r[ae.b] - r[ae.a];
            let t = if p == 2.0 {
                2.0 * ae.coeff * du
            } else {
                p * ae.coeff * du.abs().powf(p - 1.0) * du.signum()
            };
            theta += t * dr;
        }
        Ok(theta)
    }

    /// Energy-norm residual sqrt(g^T A^{-1} g) of the p = 2 optimality system.
    pub fn energy_norm_residual(&self, sol: &ElasticSolution) -> Result<f64> {
        let factor = self
            .factor
            .as_ref()
            .ok_or_else(|| Error::numerical("energy-norm residual needs p = 2"))?;
        let g = self.gradient_of(&sol.field.values);
        if g.is_empty() {
            return Ok(0.0);
        }
        let z = self.pattern.solve(factor, &g);
        Ok(g.iter()
            .zip(&z)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .max(0.0)
            .sqrt())
    }

    fn cell_gradients(&self, u: &[f64]) -> Vec<[f64; 2]> {
        let grid = self.grid;
        let mut grads = vec![[0.0f64; 2]; grid.cell_count()];
        let mut counts = vec![[0u32; 2]; grid.cell_count()];
        for ae in &self.active {
            let axis = grid.edge_axis(ae.id);
            let h = grid.edge_length(ae.id);
            let d = (u[ae.b] - u[ae.a]) / h;
            let k = match axis {
                Axis::X => 0,
                Axis::Y => 1,
            };
            let (c0, c1) = grid.edge_cells(ae.id);
            for c in [c0, c1].into_iter().flatten() {
                grads[c][k] += d;
                counts[c][k] += 1;
            }
        }
        for (g, c) in grads.iter_mut().zip(&counts) {
            for k in 0..2 {
                if c[k] > 0 {
                    g[k] /= c[k] as f64;
                }
            }
        }
        grads
    }
}

/// One-shot convenience wrapper over [`ElasticSystem`].
pub fn solve_elastic(
    grid: &Grid,
    medium: &Medium,
    crack: &CrackState,
    datum: &[f64],
    floating_rule: &FloatingRule,
) -> Result<ElasticSolution> {
    ElasticSystem::build(grid, medium, crack)?.solve(datum, floating_rule)
}
