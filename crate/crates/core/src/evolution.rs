//! Discretized-in-time quasistatic crack evolution.
//!
//! Each step takes the argmin of bulk plus surface energy over the backend's
//! admissible crack family containing the previous crack. Global minimization
//! over all edge subsets is intractable, so the family is an explicit part of
//! the model: 1D backends use crack points with at most two new faces per
//! step, the 2D path backend grows monotone dual-lattice paths by prefix
//! inclusion, and the small exhaustive 2D backend enumerates every subset of
//! a designated candidate edge set.
//!
//! Ties in the argmin go to the smaller surface measure, then to the
//! lexicographically smallest cracked edge list (boundary releases compare
//! after interior edges). Ties are resolved within a relative energy
//! tolerance so that closed-form and numeric backends agree bit-for-bit on
//! the same instance.

use crate::elastic::{ElasticSystem, FloatingRule};
use crate::error::{Error, Result};
use crate::field::{BoundaryDatum, CrackState, EnergyBreakdown, ScalarField};
use crate::grid::{EdgeId, Grid};
use crate::medium::Medium;
use rayon::prelude::*;

/// Relative tolerance inside which two candidate energies count as tied.
const TIE_TOL: f64 = 1e-9;

/// Crack growth proposed by a backend: new edges and new boundary releases.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Candidate {
    pub edges: Vec<EdgeId>,
    pub releases: Vec<usize>,
}

impl Candidate {
    pub fn empty() -> Candidate {
        Candidate::default()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.releases.is_empty()
    }
}

/// Backend selection for the evolution loop.
#[derive(Clone, Debug)]
pub enum BackendSpec {
    /// 1D, closed-form candidate energies (p = 2): the crack family is all
    /// face sets with at most `max_new` new faces per step (faces are
    /// interior edges plus the two boundary releases).
    Exhaustive1d { max_new: usize },
    /// 1D, numeric candidate energies through the elastic solver; pairs of
    /// new faces are enumerated only while the face count stays below
    /// `pair_threshold`.
    Generic1d { pair_threshold: usize },
    /// 2D monotone dual-lattice path family between the left and right
    /// sides, grown by prefix inclusion; extensions are priced by dynamic
    /// programming over the toughness and each frontier gets an elastic
    /// solve.
    Path2d,
    /// 2D exhaustive minimization over all subsets of the given candidate
    /// edges (at most 20).
    Exhaustive2d { candidate_edges: Vec<EdgeId> },
}

impl BackendSpec {
    pub fn id(&self) -> &'static str {
        match self {
            BackendSpec::Exhaustive1d { .. } => "exhaustive-1d",
            BackendSpec::Generic1d { .. } => "generic-1d",
            BackendSpec::Path2d => "path-2d",
            BackendSpec::Exhaustive2d { .. } => "exhaustive-2d",
        }
    }
}

/// Per-step record of the evolution trace.
#[derive(Clone, Debug)]
pub struct EvolutionStep {
    pub time: f64,
    pub energy: EnergyBreakdown,
    pub theta: f64,
    pub cumulative_work: f64,
    pub n_cracked: usize,
    pub n_released: usize,
    pub new_edges: Vec<EdgeId>,
    pub new_releases: Vec<usize>,
    pub field: ScalarField,
    pub datum_sup: f64,
}

/// Full evolution trace. Crack states are reconstructible from the per-step
/// increments; the final state is stored for convenience.
#[derive(Clone, Debug)]
pub struct EvolutionTrace {
    pub steps: Vec<EvolutionStep>,
    pub final_crack: CrackState,
    pub backend_id: String,
    pub delta_max: f64,
}

impl EvolutionTrace {
    /// Crack state after step `i`, rebuilt from the increments.
    pub fn crack_at(&self, grid: &Grid, medium: &Medium, i: usize) -> CrackState {
        let mut k = CrackState::empty(grid);
        for step in &self.steps[..=i] {
            k.grow(grid, medium, &step.new_edges, &step.new_releases);
        }
        k
    }
}

// ---------------------------------------------------------------------------
// Candidate families
// ---------------------------------------------------------------------------

/// 1D crack faces ordered by position: release of the left end, interior
/// edges left to right, release of the right end.
fn faces_1d(grid: &Grid, crack: &CrackState) -> Vec<Candidate> {
    let mut singles = Vec::new();
    let n_ranks = grid.dirichlet_nodes().len();
    // left release first when node 0 carries the datum
    let left_rank = grid.dirichlet_rank(0);
    if let Some(r) = left_rank {
        if !crack.is_released(r) {
            singles.push(Candidate {
                edges: vec![],
                releases: vec![r],
            });
        }
    }
    for e in 0..grid.edge_count() {
        if !crack.is_cracked(e) {
            singles.push(Candidate {
                edges: vec![e],
                releases: vec![],
            });
        }
    }
    let right_rank = grid.dirichlet_rank(grid.node_count() - 1);
    if let Some(r) = right_rank {
        if !crack.is_released(r) && Some(r) != left_rank && r < n_ranks {
            singles.push(Candidate {
                edges: vec![],
                releases: vec![r],
            });
        }
    }
    singles
}

/// State of the 2D path backend: the frontier of the monotone dual path.
#[derive(Clone, Debug, Default)]
struct PathState {
    entered: bool,
    /// Last node-column whose y-edge is cut.
    col: usize,
    /// Cell-row of the path at the frontier.
    row: usize,
}

/// Dynamic program over monotone path extensions. Returns, for every
/// reachable frontier (column, row), the cheapest extension edge set.
fn path_candidates(
    grid: &Grid,
    medium: &Medium,
    crack: &CrackState,
    state: &PathState,
) -> Vec<Candidate> {
    let counts = grid.counts();
    let (nx, ny) = (counts[0], counts[1]);
    let rows = ny - 1; // cell rows
    let kappa_y = |i: usize, r: usize| -> f64 {
        let e = grid.y_edge_id(i, r);
        medium.kappa_edge(e) * grid.edge_surface_measure(e)
    };
    let kappa_x = |i: usize, j: usize| -> f64 {
        let e = grid.x_edge_id(i, j);
        medium.kappa_edge(e) * grid.edge_surface_measure(e)
    };
    // vertical transition in cell-column c between cell rows r0 and r1 cuts
    // x-edges (c, j) for j in (min..=max excluding the endpoints' own rows)
    let vertical_cost = |c: usize, r0: usize, r1: usize| -> f64 {
        let (lo, hi) = if r0 < r1 { (r0, r1) } else { (r1, r0) };
        (lo + 1..=hi).map(|j| kappa_x(c, j)).sum()
    };
    let vertical_edges = |c: usize, r0: usize, r1: usize, out: &mut Vec<EdgeId>| {
        let (lo, hi) = if r0 < r1 { (r0, r1) } else { (r1, r0) };
        for j in lo + 1..=hi {
            out.push(grid.x_edge_id(c, j));
        }
    };

    let start_col = if state.entered { state.col + 1 } else { 0 };
    if start_col >= nx {
        return vec![Candidate::empty()];
    }

    // cost[i - start_col][r], parent row per column
    let width = nx - start_col;
    let mut cost = vec![vec![f64::INFINITY; rows]; width];
    let mut parent = vec![vec![usize::MAX; rows]; width];
    for r in 0..rows {
        let entry = if state.entered {
            // transition happens in the cell-column of the previous frontier
            vertical_cost(state.col, state.row, r)
        } else {
            0.0
        };
        cost[0][r] = entry + kappa_y(start_col, r);
    }
    for ci in 1..width {
        let i = start_col + ci;
        for r in 0..rows {
            let mut best = f64::INFINITY;
            let mut best_prev = usize::MAX;
            for rp in 0..rows {
                let c = cost[ci - 1][rp] + vertical_cost(i - 1, rp, r);
                if c < best - 1e-15 {
                    best = c;
                    best_prev = rp;
                }
            }
            cost[ci][r] = best + kappa_y(i, r);
            parent[ci][r] = best_prev;
        }
    }

    let reconstruct = |ci_end: usize, r_end: usize| -> Candidate {
        let mut rows_taken = vec![0usize; ci_end + 1];
        let mut r = r_end;
        for ci in (0..=ci_end).rev() {
            rows_taken[ci] = r;
            if ci > 0 {
                r = parent[ci][r];
            }
        }
        let mut edges = Vec::new();
        if state.entered {
            vertical_edges(state.col, state.row, rows_taken[0], &mut edges);
        }
        for (ci, &rt) in rows_taken.iter().enumerate() {
            let i = start_col + ci;
            edges.push(grid.y_edge_id(i, rt));
            if ci < ci_end && ci + 1 < rows_taken.len() {
                vertical_edges(i, rt, rows_taken[ci + 1], &mut edges);
            }
        }
        edges.sort_unstable();
        edges.retain(|&e| !crack.is_cracked(e));
        Candidate {
            edges,
            releases: vec![],
        }
    };

    let mut out = vec![Candidate::empty()];
    for ci in 0..width {
        for r in 0..rows {
            if cost[ci][r].is_finite() {
                out.push(reconstruct(ci, r));
            }
        }
    }
    out
}

/// Frontier update after a chosen path extension.
fn path_notify(grid: &Grid, state: &mut PathState, chosen: &Candidate) {
    if chosen.edges.is_empty() {
        return;
    }
    // the frontier is the rightmost cut y-edge
    let mut best: Option<(usize, usize)> = None;
    for &e in &chosen.edges {
        if e >= grid.x_edge_count() {
            let r = e - grid.x_edge_count();
            let nx = grid.counts()[0];
            let (i, j) = (r % nx, r / nx);
            if best.is_none_or(|(bi, _)| i > bi) {
                best = Some((i, j));
            }
        }
    }
    if let Some((i, j)) = best {
        state.entered = true;
        state.col = i;
        state.row = j;
    }
}

fn candidates_exhaustive_2d(
    crack: &CrackState,
    candidate_edges: &[EdgeId],
) -> Result<Vec<Candidate>> {
    let open: Vec<EdgeId> = candidate_edges
        .iter()
        .copied()
        .filter(|&e| !crack.is_cracked(e))
        .collect();
    if open.len() > 20 {
        return Err(Error::config(format!(
            "exhaustive 2D backend limited to 20 open candidate edges, got {}",
            open.len()
        )));
    }
    let m = open.len();
    let mut out = Vec::with_capacity(1usize << m);
    for mask in 0u32..(1u32 << m) {
        let mut edges = Vec::with_capacity(mask.count_ones() as usize);
        for (b, &e) in open.iter().enumerate() {
            if mask & (1 << b) != 0 {
                edges.push(e);
            }
        }
        out.push(Candidate {
            edges,
            releases: vec![],
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The incremental step and the evolution loop
// ---------------------------------------------------------------------------

/// Bulk evaluation strategy per backend.
enum BulkEval {
    /// Elastic solve per candidate.
    Numeric,
    /// 1D: any crack face disconnects the bar, so a grown state has zero
    /// bulk; the base bulk comes from the closed form span^2 / H (p = 2).
    ClosedForm1d { h_total: f64 },
    /// 1D: grown states have zero bulk; the base bulk is solved numerically.
    Chain1d,
}

struct Engine<'a> {
    grid: &'a Grid,
    medium: &'a Medium,
    eval: BulkEval,
    path_state: PathState,
    spec: BackendSpec,
}

impl<'a> Engine<'a> {
    fn new(grid: &'a Grid, medium: &'a Medium, spec: BackendSpec) -> Result<Engine<'a>> {
        let eval = match &spec {
            BackendSpec::Exhaustive1d { .. } => {
                if grid.dim() != 1 {
                    return Err(Error::config("exhaustive-1d backend needs a 1D grid"));
                }
                if medium.p() != 2.0 {
                    return Err(Error::config(
                        "exhaustive-1d closed form requires p = 2; use generic-1d",
                    ));
                }
                let h_total: f64 = (0..grid.cell_count())
                    .map(|c| grid.spacing(crate::grid::Axis::X) / medium.a_cell(c))
                    .sum();
                BulkEval::ClosedForm1d { h_total }
            }
            BackendSpec::Generic1d { .. } => {
                if grid.dim() != 1 {
                    return Err(Error::config("generic-1d backend needs a 1D grid"));
                }
                BulkEval::Chain1d
            }
            BackendSpec::Path2d => {
                if grid.dim() != 2 {
                    return Err(Error::config("path-2d backend needs a 2D grid"));
                }
                BulkEval::Numeric
            }
            BackendSpec::Exhaustive2d { candidate_edges } => {
                if grid.dim() != 2 {
                    return Err(Error::config("exhaustive-2d backend needs a 2D grid"));
                }
                for &e in candidate_edges {
                    if e >= grid.edge_count() {
                        return Err(Error::config(format!("candidate edge {e} out of range")));
                    }
                }
                BulkEval::Numeric
            }
        };
        Ok(Engine {
            grid,
            medium,
            eval,
            path_state: PathState::default(),
            spec,
        })
    }

    /// Candidate family of the 2D backends; the 1D families are enumerated
    /// implicitly by [`select_candidate_1d`].
    fn candidates(&self, crack: &CrackState) -> Result<Vec<Candidate>> {
        Ok(match &self.spec {
            BackendSpec::Exhaustive1d { .. } | BackendSpec::Generic1d { .. } => {
                unreachable!("1D families are enumerated in select_candidate_1d")
            }
            BackendSpec::Path2d => path_candidates(self.grid, self.medium, crack, &self.path_state),
            BackendSpec::Exhaustive2d { candidate_edges } => {
                candidates_exhaustive_2d(crack, candidate_edges)?
            }
        })
    }

    fn notify(&mut self, chosen: &Candidate) {
        if let BackendSpec::Path2d = self.spec {
            path_notify(self.grid, &mut self.path_state, chosen);
        }
    }

    fn pairs_enabled(&self) -> bool {
        match &self.spec {
            BackendSpec::Exhaustive1d { max_new } => *max_new >= 2,
            BackendSpec::Generic1d { pair_threshold } => self.grid.edge_count() <= *pair_threshold,
            _ => false,
        }
    }
}

/// 1D spanning bulk at the closed form: span^2 / H when the bar is intact
/// and both ends carry the datum.
fn closed_form_bulk_1d(grid: &Grid, crack: &CrackState, datum_vals: &[f64], h_total: f64) -> f64 {
    if crack.n_cracked() > 0 || !crack.released_ranks().is_empty() {
        return 0.0;
    }
    let left = grid.dirichlet_rank(0);
    let right = grid.dirichlet_rank(grid.node_count() - 1);
    match (left, right) {
        (Some(l), Some(r)) => {
            let span = datum_vals[r] - datum_vals[l];
            span * span / h_total
        }
        _ => 0.0,
    }
}

/// Surface energy and measure the candidate adds on top of the crack.
fn candidate_surface_delta(
    grid: &Grid,
    medium: &Medium,
    crack: &CrackState,
    cand: &Candidate,
) -> (f64, f64) {
    let mut de = 0.0;
    let mut dm = 0.0;
    for &e in &cand.edges {
        if !crack.is_cracked(e) {
            let m = grid.edge_surface_measure(e);
            de += medium.kappa_edge(e) * m;
            dm += m;
        }
    }
    for &r in &cand.releases {
        if !crack.is_released(r) {
            let node = grid.dirichlet_nodes()[r];
            let m = grid.node_boundary_measure(node);
            de += medium.kappa_boundary(r) * m;
            dm += m;
        }
    }
    (de, dm)
}

/// One incremental minimization step over a numeric candidate family (2D
/// backends): the argmin with deterministic tie-breaking, candidates priced
/// by an elastic solve each, in parallel with an ordered merge.
fn select_candidate_numeric(
    engine: &Engine<'_>,
    crack: &CrackState,
    datum_vals: &[f64],
    prev_field: &[f64],
) -> Result<(Candidate, f64)> {
    let candidates = engine.candidates(crack)?;
    let rule = FloatingRule::MeanOf(prev_field.to_vec());
    let bulks: Vec<f64> = candidates
        .par_iter()
        .map(|c| -> Result<f64> {
            let grown = crack.with_growth(engine.grid, engine.medium, &c.edges, &c.releases);
            let sys = ElasticSystem::build(engine.grid, engine.medium, &grown)?;
            Ok(sys.solve(datum_vals, &rule)?.bulk_energy)
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut totals = Vec::with_capacity(candidates.len());
    let mut measures = Vec::with_capacity(candidates.len());
    for (idx, c) in candidates.iter().enumerate() {
        let (de, dm) = candidate_surface_delta(engine.grid, engine.medium, crack, c);
        totals.push(bulks[idx] + crack.surface_energy() + de);
        measures.push(crack.surface_measure() + dm);
    }
    // argmin with tolerance ties: smaller surface measure first, then
    // lexicographically smallest cracked edge list, then releases
    let scale = totals.iter().fold(0.0f64, |m, t| m.max(t.abs())).max(1.0);
    let tol = TIE_TOL * scale;
    let lex_key = |idx: usize| -> (Vec<EdgeId>, Vec<usize>) {
        let grown = crack.with_growth(
            engine.grid,
            engine.medium,
            &candidates[idx].edges,
            &candidates[idx].releases,
        );
        (
            grown.cracked_edges().to_vec(),
            grown.released_ranks().to_vec(),
        )
    };
    let mut best = 0usize;
    for i in 1..candidates.len() {
        let better = if totals[i] < totals[best] - tol {
            true
        } else if totals[i] > totals[best] + tol {
            false
        } else if (measures[i] - measures[best]).abs() > 1e-12 {
            measures[i] < measures[best]
        } else {
            lex_key(i) < lex_key(best)
        };
        if better {
            best = i;
        }
    }
    let chosen = candidates[best].clone();
    Ok((chosen, totals[best]))
}

/// 1D step: the family (empty, single faces, face pairs) is enumerated
/// implicitly since every nonempty candidate zeroes the bulk on a chain with
/// end data. Pairs never win against their cheaper face (toughness is
/// bounded below), but they stay in the scanned family.
fn select_candidate_1d(
    engine: &Engine<'_>,
    crack: &CrackState,
    base_bulk: f64,
) -> Result<(Candidate, f64)> {
    #[derive(Clone, Copy, PartialEq)]
    enum Pick {
        Empty,
        Single(usize),
        Pair(usize, usize),
    }

    let grid = engine.grid;
    let medium = engine.medium;
    let singles = faces_1d(grid, crack);
    let deltas: Vec<(f64, f64)> = singles
        .iter()
        .map(|c| candidate_surface_delta(grid, medium, crack, c))
        .collect();
    let with_pairs = engine.pairs_enabled();
    let surf = crack.surface_energy();
    let meas = crack.surface_measure();
    let crack_is_grown = crack.n_cracked() > 0 || !crack.released_ranks().is_empty();
    let empty_total = if crack_is_grown {
        surf
    } else {
        base_bulk + surf
    };

    let (max1, max2) = {
        let mut a = 0.0f64;
        let mut b = 0.0f64;
        for &(de, _) in &deltas {
            if de > a {
                b = a;
                a = de;
            } else if de > b {
                b = de;
            }
        }
        (a, b)
    };
    let scale = empty_total
        .max(surf + max1 + if with_pairs { max2 } else { 0.0 })
        .max(1.0);
    let tol = TIE_TOL * scale;

    let materialize = |p: Pick| -> Candidate {
        match p {
            Pick::Empty => Candidate::empty(),
            Pick::Single(i) => singles[i].clone(),
            Pick::Pair(i, j) => {
                let mut edges = singles[i].edges.clone();
                edges.extend(&singles[j].edges);
                let mut releases = singles[i].releases.clone();
                releases.extend(&singles[j].releases);
                Candidate { edges, releases }
            }
        }
    };
    let lex_key = |p: Pick| -> (Vec<EdgeId>, Vec<usize>) {
        let c = materialize(p);
        let grown = crack.with_growth(grid, medium, &c.edges, &c.releases);
        (
            grown.cracked_edges().to_vec(),
            grown.released_ranks().to_vec(),
        )
    };

    let mut best = Pick::Empty;
    let mut best_total = empty_total;
    let mut best_measure = meas;
    let consider =
        |pick: Pick, total: f64, measure: f64, best: &mut Pick, bt: &mut f64, bm: &mut f64| {
            let better = if total < *bt - tol {
                true
            } else if total > *bt + tol {
                false
            } else if (measure - *bm).abs() > 1e-12 {
                measure < *bm
            } else {
                lex_key(pick) < lex_key(*best)
            };
            if better {
                *best = pick;
                *bt = total;
                *bm = measure;
            }
        };
    for (i, &(de, dm)) in deltas.iter().enumerate() {
        consider(
            Pick::Single(i),
            surf + de,
            meas + dm,
            &mut best,
            &mut best_total,
            &mut best_measure,
        );
    }
    if with_pairs {
        for i in 0..deltas.len() {
            for j in i + 1..deltas.len() {
                consider(
                    Pick::Pair(i, j),
                    surf + deltas[i].0 + deltas[j].0,
                    meas + deltas[i].1 + deltas[j].1,
                    &mut best,
                    &mut best_total,
                    &mut best_measure,
                );
            }
        }
    }
    Ok((materialize(best), best_total))
}

/// Runs the full discretized-in-time evolution.
pub fn run_evolution(
    grid: &Grid,
    medium: &Medium,
    datum: &BoundaryDatum,
    backend: BackendSpec,
) -> Result<EvolutionTrace> {
    datum.validate()?;
    medium.check_bounds()?;
    let n_ranks = grid.dirichlet_nodes().len();
    if n_ranks == 0 {
        // legal but inert; the trace would be all zeros
        eprintln!("warning: evolution with an empty Dirichlet set");
    }
    let mut engine = Engine::new(grid, medium, backend)?;
    let backend_id = engine.spec.id().to_string();

    let mut crack = CrackState::empty(grid);
    let mut prev_field = vec![0.0f64; grid.node_count()];
    let mut steps: Vec<EvolutionStep> = Vec::with_capacity(datum.n_steps());
    let mut cumulative_work = 0.0f64;
    let mut theta_prev = 0.0f64;
    let mut delta_max = 0.0f64;
    let mut system: Option<ElasticSystem> = None;

    for i in 0..datum.n_steps() {
        let t = datum.times[i];
        let datum_vals = datum.values_at(i);
        let datum_sup = datum.sup_at(i);
        if datum_sup > datum.bound + 1e-12 * (1.0 + datum.bound) {
            return Err(Error::invariant(format!(
                "datum at t = {t} exceeds its declared bound"
            )));
        }

        let (chosen, _) = match engine.eval {
            BulkEval::ClosedForm1d { h_total } => {
                let base = closed_form_bulk_1d(grid, &crack, &datum_vals, h_total);
                select_candidate_1d(&engine, &crack, base)?
            }
            BulkEval::Chain1d => {
                // base bulk of the intact bar, solved numerically with the
                // factorization reused across steps
                let base = if crack.n_cracked() == 0 && crack.released_ranks().is_empty() {
                    if system.is_none() {
                        system = Some(ElasticSystem::build(grid, medium, &crack)?);
                    }
                    system
                        .as_ref()
                        .unwrap()
                        .solve(&datum_vals, &FloatingRule::MeanOf(prev_field.clone()))?
                        .bulk_energy
                } else {
                    0.0
                };
                select_candidate_1d(&engine, &crack, base)?
            }
            BulkEval::Numeric => {
                select_candidate_numeric(&engine, &crack, &datum_vals, &prev_field)?
            }
        };
        if !chosen.is_empty() {
            crack.grow(grid, medium, &chosen.edges, &chosen.releases);
            engine.notify(&chosen);
            system = None;
        }
        if system.is_none() {
            system = Some(ElasticSystem::build(grid, medium, &crack)?);
        }
        let sys = system.as_ref().unwrap();
        let sol = sys.solve(&datum_vals, &FloatingRule::MeanOf(prev_field.clone()))?;
        let theta = sys.work_integrand(&sol, &datum.rate_at(i))?;
        if i > 0 {
            let dt = datum.times[i] - datum.times[i - 1];
            delta_max = delta_max.max(dt);
            cumulative_work += 0.5 * (theta + theta_prev) * dt;
        }

        // inline admissibility checks
        if sol.field.sup_norm() > datum_sup + 1e-9 * (1.0 + datum_sup) {
            return Err(Error::invariant(format!(
                "sup bound violated at t = {t}: |u| = {} > {datum_sup}",
                sol.field.sup_norm()
            )));
        }
        for (rank, &node) in grid.dirichlet_nodes().iter().enumerate() {
            if !crack.is_released(rank) {
                let diff = (sol.field.values[node] - datum_vals[rank]).abs();
                if diff > 1e-9 * (1.0 + datum_sup) {
                    return Err(Error::invariant(format!(
                        "datum not attained at node {node}, |u - psi| = {diff}"
                    )));
                }
            }
        }
        crack.check_cache(grid, medium)?;

        steps.push(EvolutionStep {
            time: t,
            energy: EnergyBreakdown::new(sol.bulk_energy, crack.surface_energy()),
            theta,
            cumulative_work,
            n_cracked: crack.n_cracked(),
            n_released: crack.released_ranks().len(),
            new_edges: chosen.edges.clone(),
            new_releases: chosen.releases.clone(),
            field: sol.field.clone(),
            datum_sup,
        });
        prev_field = sol.field.values.clone();
        theta_prev = theta;
    }

    Ok(EvolutionTrace {
        steps,
        final_crack: crack,
        backend_id,
        delta_max,
    })
}

// ---------------------------------------------------------------------------
// Minimality verification
// ---------------------------------------------------------------------------

/// Outcome of the unilateral minimality check of a state (u, K): the bulk
/// energy of u must not beat any competitor (v, H) with H containing K by
/// more than the surface cost of H minus K.
#[derive(Clone, Debug)]
pub struct MinimalityReport {
    pub n_checked: usize,
    /// Smallest competitor margin: bulk(v) + surface(H minus K) - bulk(u).
    pub worst_margin: f64,
    pub violations: usize,
    pub witness: Option<Candidate>,
    pub tolerance: f64,
}

impl MinimalityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Exhaustively (or by budget sampling) verifies unilateral minimality of
/// the state with crack `crack` under `datum_vals`. The challenge family is
/// every subset of `candidate_edges` not already in the crack; when the
/// family exceeds `budget`, a deterministic pseudo-random sample of that
/// size is drawn (seeded by `seed`).
pub fn verify_unilateral_minimality(
    grid: &Grid,
    medium: &Medium,
    crack: &CrackState,
    datum_vals: &[f64],
    candidate_edges: &[EdgeId],
    budget: usize,
    seed: u64,
) -> Result<MinimalityReport> {
    let open: Vec<EdgeId> = candidate_edges
        .iter()
        .copied()
        .filter(|&e| !crack.is_cracked(e))
        .collect();
    let m = open.len();
    let rule = FloatingRule::Zero;
    let base = ElasticSystem::build(grid, medium, crack)?
        .solve(datum_vals, &rule)?
        .bulk_energy;
    let scale = base.abs().max(1.0);
    let tolerance = 1e-10 * scale;

    let masks: Vec<u64> = if m <= 20 && (1usize << m) <= budget.max(1 << m.min(20)) {
        (0u64..(1u64 << m)).collect()
    } else {
        // deterministic LCG sample of the huge family
        let mut s = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (0..budget)
            .map(|_| {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                if m >= 64 {
                    s
                } else {
                    s & ((1u64 << m) - 1)
                }
            })
            .collect()
    };

    let results: Vec<(f64, u64)> = masks
        .par_iter()
        .map(|&mask| -> Result<(f64, u64)> {
            let edges: Vec<EdgeId> = open
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << *b) != 0)
                .map(|(_, &e)| e)
                .collect();
            let grown = crack.with_growth(grid, medium, &edges, &[]);
            let charge = grown.surface_energy() - crack.surface_energy();
            let bulk = ElasticSystem::build(grid, medium, &grown)?
                .solve(datum_vals, &rule)?
                .bulk_energy;
            Ok((bulk + charge - base, mask))
        })
        .collect::<Result<_>>()?;

    let mut worst_margin = f64::INFINITY;
    let mut violations = 0usize;
    let mut witness = None;
    for &(margin, mask) in &results {
        if margin < worst_margin {
            worst_margin = margin;
            if margin < -tolerance {
                let edges: Vec<EdgeId> = open
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask & (1 << *b) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                witness = Some(Candidate {
                    edges,
                    releases: vec![],
                });
            }
        }
        if margin < -tolerance {
            violations += 1;
        }
    }
    Ok(MinimalityReport {
        n_checked: results.len(),
        worst_margin,
        violations,
        witness,
        tolerance,
    })
}

// ---------------------------------------------------------------------------
// Energy balance audit and trace validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct AuditReport {
    /// r_i = E_i - E_0 - W_i per step.
    pub residuals: Vec<f64>,
    pub max_abs: f64,
}

/// Residual of the discrete energy balance along the trace.
pub fn energy_balance_audit(trace: &EvolutionTrace) -> AuditReport {
    let e0 = trace.steps.first().map(|s| s.energy.total()).unwrap_or(0.0);
    let residuals: Vec<f64> = trace
        .steps
        .iter()
        .map(|s| s.energy.total() - e0 - s.cumulative_work)
        .collect();
    let max_abs = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    AuditReport { residuals, max_abs }
}

/// Trace invariants: irreversibility, surface monotonicity, admissibility of
/// every stored field, the sup bound, and the surface-energy cache.
pub fn validate_trace(
    grid: &Grid,
    medium: &Medium,
    datum: &BoundaryDatum,
    trace: &EvolutionTrace,
) -> Result<()> {
    if trace.steps.len() != datum.n_steps() {
        return Err(Error::invariant(
            "trace length does not match the time grid",
        ));
    }
    let mut crack = CrackState::empty(grid);
    let mut last_surface = 0.0f64;
    for (i, step) in trace.steps.iter().enumerate() {
        let prev = crack.clone();
        crack.grow(grid, medium, &step.new_edges, &step.new_releases);
        if !prev.is_subset_of(&crack) {
            return Err(Error::invariant("crack shrank between steps"));
        }
        crack.check_cache(grid, medium)?;
        let surf = crack.surface_energy();
        if surf + 1e-12 < last_surface {
            return Err(Error::invariant(format!(
                "surface energy decreased at step {i}: {surf} < {last_surface}"
            )));
        }
        if (surf - step.energy.surface).abs() > 1e-9 * (1.0 + surf) {
            return Err(Error::invariant(format!(
                "recorded surface energy at step {i} does not match the crack"
            )));
        }
        last_surface = surf;

        // admissibility: jumps only across cracked edges
        let jump_tol = 1e-10 * (1.0 + step.datum_sup);
        for &e in &step.field.jump_edges(grid, jump_tol) {
            if !crack.is_cracked(e) {
                return Err(Error::invariant(format!(
                    "field jumps across uncracked edge {e} at step {i}"
                )));
            }
        }
        // the datum is attained on non-released Dirichlet nodes
        let datum_vals = datum.values_at(i);
        for (rank, &node) in grid.dirichlet_nodes().iter().enumerate() {
            if !crack.is_released(rank) {
                let diff = (step.field.values[node] - datum_vals[rank]).abs();
                if diff > 1e-9 * (1.0 + step.datum_sup) {
                    return Err(Error::invariant(format!(
                        "datum not attained at step {i}, node {node}"
                    )));
                }
            }
        }
        if step.field.sup_norm() > step.datum_sup + 1e-9 * (1.0 + step.datum_sup) {
            return Err(Error::invariant(format!("sup bound violated at step {i}")));
        }
    }
    if crack.cracked_edges() != trace.final_crack.cracked_edges()
        || crack.released_ranks() != trace.final_crack.released_ranks()
    {
        return Err(Error::invariant(
            "final crack does not match the increments",
        ));
    }
    Ok(())
}

/// Crack-enlargement comparison: enlarging the crack at a sampled step never
/// increases the optimal bulk energy.
pub fn check_enlargement_comparison(
    grid: &Grid,
    medium: &Medium,
    datum: &BoundaryDatum,
    trace: &EvolutionTrace,
    probes: usize,
) -> Result<()> {
    if trace.steps.is_empty() {
        return Ok(());
    }
    let stride = (trace.steps.len() / probes.max(1)).max(1);
    let mut crack = CrackState::empty(grid);
    for (i, step) in trace.steps.iter().enumerate() {
        crack.grow(grid, medium, &step.new_edges, &step.new_releases);
        if i % stride != 0 {
            continue;
        }
        let datum_vals = datum.values_at(i);
        let rule = FloatingRule::Zero;
        let base = ElasticSystem::build(grid, medium, &crack)?
            .solve(&datum_vals, &rule)?
            .bulk_energy;
        // enlarge by the first uncracked edge (deterministic probe)
        if let Some(extra) = (0..grid.edge_count()).find(|&e| !crack.is_cracked(e)) {
            let grown = crack.with_growth(grid, medium, &[extra], &[]);
            let bulk = ElasticSystem::build(grid, medium, &grown)?
                .solve(&datum_vals, &rule)?
                .bulk_energy;
            if bulk > base + 1e-9 * (1.0 + base) {
                return Err(Error::invariant(format!(
                    "enlarging the crack increased bulk energy at step {i}: {bulk} > {base}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::uniform_times;
    use crate::grid::{build_grid, DirichletSpec};

    fn bar(nodes: usize) -> Grid {
        build_grid(1, &[1.0], &[nodes], DirichletSpec::Ends).unwrap()
    }

    fn ramp(t_end: f64, delta: f64) -> BoundaryDatum {
        BoundaryDatum::ramp(uniform_times(t_end, delta).unwrap(), vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn homogeneous_bar_cracks_just_after_one() {
        let g = bar(201);
        let m = Medium::constant(&g, 1.0, 1.0, 2.0).unwrap();
        let d = ramp(1.2, 0.01);
        let trace = run_evolution(&g, &m, &d, BackendSpec::Exhaustive1d { max_new: 2 }).unwrap();
        validate_trace(&g, &m, &d, &trace).unwrap();
        // energies tie exactly at t = 1; the tie keeps the uncracked state,
        // so the crack lands at the first step with t^2 > 1
        let crack_step = trace
            .steps
            .iter()
            .position(|s| s.n_cracked + s.n_released > 0)
            .unwrap();
        assert!((trace.steps[crack_step].time - 1.01).abs() < 1e-12);
        // E(t) = min(t^2, 1)
        for s in &trace.steps {
            let expect = (s.time * s.time).min(1.0);
            assert!(
                (s.energy.total() - expect).abs() < 2.0 * 0.01 + 1e-9,
                "t = {}: {} vs {expect}",
                s.time,
                s.energy.total()
            );
        }
        // the leftmost face (the released left end) wins the kappa tie
        assert_eq!(trace.steps[crack_step].new_releases, vec![0]);
        assert!(trace.steps[crack_step].new_edges.is_empty());
    }

    #[test]
    fn heterogeneous_crack_time() {
        // H = 0.625, kappa = 2 on the left half, 1 on the right:
        // t_c = sqrt(H * kappa_min) = sqrt(0.625)
        let g = bar(201);
        let mut a = vec![1.0; 200];
        for c in 100..200 {
            a[c] = 4.0;
        }
        let mut kappa = vec![2.0; g.edge_count()];
        for (e, k) in kappa.iter_mut().enumerate() {
            let mid = g.edge_midpoint(e)[0];
            if mid > 0.5 {
                *k = 1.0;
            }
        }
        // boundary faces inherit the adjacent toughness
        let kb = vec![2.0, 1.0];
        let m = Medium::new(&g, a, kappa, kb, 2.0, 1.0, 4.0).unwrap();
        let d = ramp(1.2, 0.01);
        let trace = run_evolution(&g, &m, &d, BackendSpec::Exhaustive1d { max_new: 2 }).unwrap();
        let t_c = 0.625f64.sqrt();
        let crack_step = trace
            .steps
            .iter()
            .find(|s| s.n_cracked + s.n_released > 0)
            .unwrap();
        assert!(
            crack_step.time >= t_c && crack_step.time <= t_c + 0.01 + 1e-12,
            "crack at {} vs t_c = {t_c}",
            crack_step.time
        );
        // the crack sits in the weak half
        if let Some(&e) = crack_step.new_edges.first() {
            assert!(g.edge_midpoint(e)[0] > 0.5);
        } else {
            assert_eq!(crack_step.new_releases, vec![1]);
        }
    }

    #[test]
    fn backends_agree_in_1d() {
        let g = bar(101);
        let mut a = vec![1.0; 100];
        for c in 30..70 {
            a[c] = 3.0;
        }
        let mut kappa = vec![1.5; g.edge_count()];
        for (e, k) in kappa.iter_mut().enumerate() {
            if g.edge_midpoint(e)[0] > 0.6 {
                *k = 0.8;
            }
        }
        let m = Medium::new(&g, a, kappa, vec![1.5, 0.8], 2.0, 0.8, 3.0).unwrap();
        let d = ramp(1.4, 0.02);
        let t1 = run_evolution(&g, &m, &d, BackendSpec::Exhaustive1d { max_new: 2 }).unwrap();
        let t2 = run_evolution(
            &g,
            &m,
            &d,
            BackendSpec::Generic1d {
                pair_threshold: 256,
            },
        )
        .unwrap();
        assert_eq!(t1.steps.len(), t2.steps.len());
        for (s1, s2) in t1.steps.iter().zip(&t2.steps) {
            assert_eq!(s1.new_edges, s2.new_edges);
            assert_eq!(s1.new_releases, s2.new_releases);
            assert!((s1.energy.total() - s2.energy.total()).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_datum_stays_empty() {
        let g = bar(51);
        let m = Medium::constant(&g, 1.0, 1.0, 2.0).unwrap();
        let d = BoundaryDatum::ramp(uniform_times(1.0, 0.1).unwrap(), vec![0.0, 0.0]).unwrap();
        let trace = run_evolution(&g, &m, &d, BackendSpec::Exhaustive1d { max_new: 2 }).unwrap();
        assert!(trace.final_crack.n_cracked() == 0);
        assert!(trace.steps.iter().all(|s| s.energy.total().abs() < 1e-15));
        let audit = energy_balance_audit(&trace);
        assert_eq!(audit.max_abs, 0.0);
    }

    #[test]
    fn energy_balance_first_order_in_delta() {
        let g = bar(201);
        let m = Medium::constant(&g, 1.0, 1.0, 2.0).unwrap();
        let mut maxima = Vec::new();
        for delta in [0.01, 0.005] {
            let d = ramp(1.2, delta);
            let trace =
                run_evolution(&g, &m, &d, BackendSpec::Exhaustive1d { max_new: 2 }).unwrap();
            let audit = energy_balance_audit(&trace);
            assert!(
                audit.max_abs <= 3.0 * delta,
                "delta {delta}: residual {}",
                audit.max_abs
            );
            maxima.push(audit.max_abs);
        }
        // halving delta halves the residual (first-order rate)
        let rate = maxima[0] / maxima[1];
        assert!((1.5..=3.0).contains(&rate), "rate {rate}");
    }

    #[test]
    fn fully_cut_state_is_stationary() {
        let g = bar(41);
        let m = Medium::constant(&g, 1.0, 1.0, 2.0).unwrap();
        let d = ramp(2.0, 0.25);
        let trace = run_evolution(&g, &m, &d, BackendSpec::Exhaustive1d { max_new: 2 }).unwrap();
        let crack_step = trace
            .steps
            .iter()
            .position(|s| s.n_cracked + s.n_released > 0)
            .unwrap();
        for s in &trace.steps[crack_step..] {
            assert_eq!(s.n_cracked + s.n_released, 1);
            assert!(s.energy.bulk.abs() < 1e-14);
        }
    }

    #[test]
    fn path_backend_follows_weak_stripe() {
        // weak horizontal stripe: the crack runs along it
        let g = build_grid(2, &[1.0, 1.0], &[9, 9], DirichletSpec::BottomTop).unwrap();
        let stripe_row = 4;
        let mut kappa = vec![2.0; g.edge_count()];
        for i in 0..9 {
            for j in 0..8 {
                let e = g.y_edge_id(i, j);
                if j == stripe_row {
                    kappa[e] = 0.5;
                }
            }
        }
        let kb = vec![2.0; g.dirichlet_nodes().len()];
        let m = Medium::new(&g, vec![1.0; g.cell_count()], kappa, kb, 2.0, 0.5, 2.0).unwrap();
        let times = uniform_times(2.0, 0.1).unwrap();
        let profile: Vec<f64> = g
            .dirichlet_nodes()
            .iter()
            .map(|&n| if g.node_coords(n).1 == 8 { 1.0 } else { 0.0 })
            .collect();
        let d = BoundaryDatum::ramp(times, profile).unwrap();
        let trace = run_evolution(&g, &m, &d, BackendSpec::Path2d).unwrap();
        validate_trace(&g, &m, &d, &trace).unwrap();
        let k = &trace.final_crack;
        assert!(
            k.n_cracked() >= 9,
            "crack should span, got {}",
            k.n_cracked()
        );
        // the crack is exactly the in-stripe path: 9 y-edges at the weak row
        for &e in k.cracked_edges() {
            assert_eq!(g.edge_axis(e), crate::grid::Axis::Y);
            let (_, j) = {
                let r = e - g.x_edge_count();
                (r % 9, r / 9)
            };
            assert_eq!(j, stripe_row);
        }
        // surface energy = stripe cost: 9 edges, boundary two at half measure
        let h = 1.0 / 8.0;
        let expect = 0.5 * (8.0 * h);
        assert!((k.surface_energy() - expect).abs() < 1e-12);
        // bulk drops to zero after the cut
        assert!(trace.steps.last().unwrap().energy.bulk.abs() < 1e-12);
    }

    #[test]
    fn exhaustive_2d_minimality_certified() {
        let g = build_grid(2, &[1.0, 1.0], &[3, 3], DirichletSpec::BottomTop).unwrap();
        let edges: Vec<EdgeId> = (0..g.edge_count()).collect();
        let mut kappa: Vec<f64> = (0..g.edge_count())
            .map(|e| 0.6 + 0.4 * (((e * 7919) % 17) as f64 / 17.0))
            .collect();
        kappa[0] = 0.55;
        let kb = vec![2.0; g.dirichlet_nodes().len()];
        let m = Medium::new(&g, vec![1.0; 4], kappa, kb, 2.0, 0.5, 2.0).unwrap();
        let d = {
            let profile: Vec<f64> = g
                .dirichlet_nodes()
                .iter()
                .map(|&n| if g.node_coords(n).1 == 2 { 1.0 } else { 0.0 })
                .collect();
            BoundaryDatum::ramp(uniform_times(1.6, 0.2).unwrap(), profile).unwrap()
        };
        let trace = run_evolution(
            &g,
            &m,
            &d,
            BackendSpec::Exhaustive2d {
                candidate_edges: edges.clone(),
            },
        )
        .unwrap();
        validate_trace(&g, &m, &d, &trace).unwrap();
        // every step of an exhaustive backend is unilateral minimal
        for (i, _) in trace.steps.iter().enumerate().step_by(3) {
            let crack = trace.crack_at(&g, &m, i);
            let report =
                verify_unilateral_minimality(&g, &m, &crack, &d.values_at(i), &edges, 1 << 12, 7)
                    .unwrap();
            assert!(
                report.passed(),
                "violation at step {i}: margin = {}",
                report.worst_margin
            );
        }
    }

    #[test]
    fn superfluous_crack_edge_is_sunk_cost() {
        // a state with an unnecessary cracked edge is still unilateral
        // minimal: the comparison charges only new surface
        let g = build_grid(2, &[1.0, 1.0], &[3, 3], DirichletSpec::BottomTop).unwrap();
        let m = Medium::constant(&g, 1.0, 1.0, 2.0).unwrap();
        let mut crack = CrackState::empty(&g);
        crack.grow(&g, &m, &[g.x_edge_id(0, 1)], &[]);
        let datum: Vec<f64> = g
            .dirichlet_nodes()
            .iter()
            .map(|&n| if g.node_coords(n).1 == 2 { 0.4 } else { 0.0 })
            .collect();
        let edges: Vec<EdgeId> = (0..g.edge_count()).collect();
        let report =
            verify_unilateral_minimality(&g, &m, &crack, &datum, &edges, 1 << 12, 3).unwrap();
        assert!(report.passed(), "margin {}", report.worst_margin);
    }

    #[test]
    fn perturbed_state_yields_witness() {
        // just past the crack time the uncracked state is not minimal:
        // the witness adds a face
        let g = bar(51);
        let m = Medium::constant(&g, 1.0, 1.0, 2.0).unwrap();
        let crack = CrackState::empty(&g);
        let edges: Vec<EdgeId> = (0..g.edge_count()).collect();
        // t = 1.2: t^2 = 1.44 > kappa = 1
        let report =
            verify_unilateral_minimality(&g, &m, &crack, &[0.0, 1.2], &edges[..12], 1 << 12, 3)
                .unwrap();
        assert!(!report.passed());
        assert!(report.witness.is_some());
        assert!(report.worst_margin < -0.4);
    }

    #[test]
    fn monotone_load_crack_time_formula() {
        // t_c = sqrt(H * kappa_min) across media
        for (a_val, k_val) in [(1.0, 1.0), (2.0, 1.0), (1.0, 0.5), (4.0, 2.0)] {
            let g = bar(101);
            let m = Medium::constant(&g, a_val, k_val, 2.0).unwrap();
            let d = ramp(2.5, 0.005);
            let trace =
                run_evolution(&g, &m, &d, BackendSpec::Exhaustive1d { max_new: 2 }).unwrap();
            let h_total = 1.0 / a_val;
            let t_c = (h_total * k_val).sqrt();
            let step = trace
                .steps
                .iter()
                .find(|s| s.n_cracked + s.n_released > 0)
                .unwrap();
            assert!(
                step.time >= t_c - 1e-12 && step.time <= t_c + 0.005 + 1e-12,
                "a={a_val} k={k_val}: crack at {} vs {t_c}",
                step.time
            );
        }
    }

    #[test]
    fn enlargement_comparison_holds() {
        let g = bar(51);
        let m = Medium::constant(&g, 1.0, 1.0, 2.0).unwrap();
        let d = ramp(1.3, 0.05);
        let trace = run_evolution(&g, &m, &d, BackendSpec::Exhaustive1d { max_new: 2 }).unwrap();
        check_enlargement_comparison(&g, &m, &d, &trace, 5).unwrap();
    }

    #[test]
    fn explicit_datum_table_matches_ramp() {
        let g = bar(81);
        let m = Medium::constant(&g, 1.0, 1.0, 2.0).unwrap();
        let times = uniform_times(1.2, 0.05).unwrap();
        let ramp_datum = BoundaryDatum::ramp(times.clone(), vec![0.0, 1.0]).unwrap();
        let rows: Vec<Vec<f64>> = times.iter().map(|&t| vec![0.0, t]).collect();
        let table_datum = BoundaryDatum::explicit(times, rows, 1.2).unwrap();
        let t1 = run_evolution(
            &g,
            &m,
            &ramp_datum,
            BackendSpec::Exhaustive1d { max_new: 2 },
        )
        .unwrap();
        let t2 = run_evolution(
            &g,
            &m,
            &table_datum,
            BackendSpec::Exhaustive1d { max_new: 2 },
        )
        .unwrap();
        for (s1, s2) in t1.steps.iter().zip(&t2.steps) {
            assert_eq!(s1.new_edges, s2.new_edges);
            assert_eq!(s1.new_releases, s2.new_releases);
            assert!((s1.energy.total() - s2.energy.total()).abs() < 1e-12);
            assert!((s1.theta - s2.theta).abs() < 1e-10);
        }
    }

    #[test]
    fn unloading_keeps_the_crack() {
        // load past the crack threshold, then unload: irreversibility keeps
        // the surface energy, the bulk stays zero
        let g = bar(81);
        let m = Medium::constant(&g, 1.0, 1.0, 2.0).unwrap();
        let times = uniform_times(1.2, 0.05).unwrap();
        let rows: Vec<Vec<f64>> = times
            .iter()
            .map(|&t| vec![0.0, (2.0 * t).min(2.0 * (1.2 - t))])
            .collect();
        let d = BoundaryDatum::explicit(times, rows, 1.2).unwrap();
        let trace = run_evolution(&g, &m, &d, BackendSpec::Exhaustive1d { max_new: 2 }).unwrap();
        validate_trace(&g, &m, &d, &trace).unwrap();
        let crack_step = trace
            .steps
            .iter()
            .position(|s| s.n_cracked + s.n_released > 0)
            .expect("the peak load 1.2 exceeds the threshold");
        for s in &trace.steps[crack_step..] {
            assert_eq!(s.n_cracked + s.n_released, 1);
            assert!((s.energy.surface - 1.0).abs() < 1e-12);
            assert!(s.energy.bulk.abs() < 1e-13);
        }
    }
}
