//! Crack-discounted surface functionals via exact minimum cuts.
//!
//! A two-valued field on a window is a graph cut; its discounted surface
//! energy is the total weight of its jump edges outside the current crack.
//! Minimizing over all two-valued fields separating two boundary regions is
//! a max-flow problem, and the flow value is a machine-checkable optimality
//! certificate for the cut. Windowed cuts divided by the window cross-section
//! estimate the relaxed surface density; driving the crack-sequence index n
//! and the window radius along a diagonal realizes the two-limit probe.

use crate::error::{Error, Result};
use crate::field::CrackState;
use crate::grid::{Axis, EdgeId, Grid};
use crate::medium::Medium;
use rayon::prelude::*;

// ---------------------------------------------------------------------------
// Dinic max-flow over generic capacities
// ---------------------------------------------------------------------------

/// Capacity arithmetic for the flow solver. `floor` separates usable residual
/// capacity from rounding dust (zero for integers).
pub trait Capacity:
    Copy + PartialOrd + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn min2(a: Self, b: Self) -> Self;
}

impl Capacity for u64 {
    fn zero() -> Self {
        0
    }
    fn min2(a: Self, b: Self) -> Self {
        a.min(b)
    }
}

impl Capacity for f64 {
    fn zero() -> Self {
        0.0
    }
    fn min2(a: Self, b: Self) -> Self {
        a.min(b)
    }
}

/// Flow network with paired arcs (arc id ^ 1 is the reverse arc).
pub struct FlowNetwork<C: Capacity> {
    n: usize,
    to: Vec<u32>,
    cap: Vec<C>,
    adj_ptr: Vec<usize>,
    adj: Vec<u32>,
    built: bool,
    pending: Vec<(u32, u32)>,
    floor: C,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(n: usize, floor: C) -> FlowNetwork<C> {
        FlowNetwork {
            n,
            to: Vec::new(),
            cap: Vec::new(),
            adj_ptr: Vec::new(),
            adj: Vec::new(),
            built: false,
            pending: Vec::new(),
            floor,
        }
    }

    /// Adds an arc pair u -> v with capacity `fwd` and v -> u with `bwd`.
    /// An undirected cut edge uses fwd == bwd.
    pub fn add_arc_pair(&mut self, u: u32, v: u32, fwd: C, bwd: C) -> u32 {
        debug_assert!(!self.built);
        let id = self.to.len() as u32;
        self.to.push(v);
        self.cap.push(fwd);
        self.to.push(u);
        self.cap.push(bwd);
        self.pending.push((u, id));
        self.pending.push((v, id + 1));
        id
    }

    fn build(&mut self) {
        let mut counts = vec![0usize; self.n + 1];
        for &(u, _) in &self.pending {
            counts[u as usize + 1] += 1;
        }
        for k in 0..self.n {
            counts[k + 1] += counts[k];
        }
        let mut adj = vec![0u32; self.pending.len()];
        let mut fill = counts.clone();
        for &(u, a) in &self.pending {
            adj[fill[u as usize]] = a;
            fill[u as usize] += 1;
        }
        self.adj_ptr = counts;
        self.adj = adj;
        self.pending = Vec::new();
        self.built = true;
    }

    fn usable(&self, arc: u32) -> bool {
        self.cap[arc as usize] > self.floor
    }

    /// Dinic max flow from `s` to `t`. Returns the flow value.
    pub fn max_flow(&mut self, s: u32, t: u32) -> C {
        if !self.built {
            self.build();
        }
        let n = self.n;
        let mut total: Option<C> = None;
        let mut level = vec![-1i32; n];
        let mut it = vec![0usize; n];
        let mut queue: Vec<u32> = Vec::with_capacity(n);
        loop {
            // BFS layering
            level.iter_mut().for_each(|l| *l = -1);
            queue.clear();
            queue.push(s);
            level[s as usize] = 0;
            let mut qh = 0;
            while qh < queue.len() {
                let v = queue[qh];
                qh += 1;
                for p in self.adj_ptr[v as usize]..self.adj_ptr[v as usize + 1] {
                    let a = self.adj[p];
                    let w = self.to[a as usize];
                    if level[w as usize] < 0 && self.usable(a) {
                        level[w as usize] = level[v as usize] + 1;
                        queue.push(w);
                    }
                }
            }
            if level[t as usize] < 0 {
                break;
            }
            for (k, v) in it.iter_mut().enumerate() {
                *v = self.adj_ptr[k];
            }
            // blocking flow: iterative DFS along level-increasing usable arcs
            let mut path: Vec<u32> = Vec::new();
            let mut v = s;
            loop {
                if v == t {
                    let mut bottleneck = self.cap[path[0] as usize];
                    for &a in &path[1..] {
                        bottleneck = C::min2(bottleneck, self.cap[a as usize]);
                    }
                    for &a in &path {
                        self.cap[a as usize] = self.cap[a as usize] - bottleneck;
                        self.cap[(a ^ 1) as usize] = self.cap[(a ^ 1) as usize] + bottleneck;
                    }
                    total = Some(match total {
                        None => bottleneck,
                        Some(t0) => t0 + bottleneck,
                    });
                    // restart from the source; saturated arcs are skipped by `it`
                    path.clear();
                    v = s;
                    continue;
                }
                let mut advanced = false;
                while it[v as usize] < self.adj_ptr[v as usize + 1] {
                    let a = self.adj[it[v as usize]];
                    let w = self.to[a as usize];
                    if self.usable(a) && level[w as usize] == level[v as usize] + 1 {
                        path.push(a);
                        v = w;
                        advanced = true;
                        break;
                    }
                    it[v as usize] += 1;
                }
                if advanced {
                    continue;
                }
                level[v as usize] = -1;
                match path.pop() {
                    None => break,
                    Some(a) => {
                        v = self.to[(a ^ 1) as usize];
                        it[v as usize] += 1;
                    }
                }
            }
        }
        total.unwrap_or_else(C::zero)
    }

    /// Nodes reachable from `s` in the residual graph (the source side of the
    /// minimum cut). Call after `max_flow`.
    pub fn source_side(&mut self, s: u32) -> Vec<bool> {
        if !self.built {
            self.build();
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![s];
        seen[s as usize] = true;
        while let Some(v) = stack.pop() {
            for p in self.adj_ptr[v as usize]..self.adj_ptr[v as usize + 1] {
                let a = self.adj[p];
                let w = self.to[a as usize];
                if !seen[w as usize] && self.usable(a) {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

// ---------------------------------------------------------------------------
// Cut problems on grid windows
// ---------------------------------------------------------------------------

/// Inclusive node-index window of a grid.
#[derive(Clone, Copy, Debug)]
pub struct Window {
    pub i0: usize,
    pub i1: usize,
    pub j0: usize,
    pub j1: usize,
}

impl Window {
    pub fn full(grid: &Grid) -> Window {
        let c = grid.counts();
        Window {
            i0: 0,
            i1: c[0] - 1,
            j0: 0,
            j1: c[1].saturating_sub(1),
        }
    }

    /// Window of nodes within sup-distance `radius` of a physical center.
    pub fn around(grid: &Grid, center: [f64; 2], radius: f64) -> Window {
        let hx = grid.spacing(Axis::X);
        let hy = if grid.dim() == 2 {
            grid.spacing(Axis::Y)
        } else {
            1.0
        };
        let c = grid.counts();
        let clampi = |v: f64, hi: usize| -> usize { (v.max(0.0) as usize).min(hi) };
        Window {
            i0: clampi(((center[0] - radius) / hx).ceil(), c[0] - 1),
            i1: clampi(((center[0] + radius) / hx).floor(), c[0] - 1),
            j0: if grid.dim() == 2 {
                clampi(((center[1] - radius) / hy).ceil(), c[1] - 1)
            } else {
                0
            },
            j1: if grid.dim() == 2 {
                clampi(((center[1] + radius) / hy).floor(), c[1] - 1)
            } else {
                0
            },
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i >= self.i0 && i <= self.i1 && j >= self.j0 && j <= self.j1
    }

    pub fn width(&self, grid: &Grid) -> f64 {
        self.i1.saturating_sub(self.i0) as f64 * grid.spacing(Axis::X)
    }

    pub fn height(&self, grid: &Grid) -> f64 {
        self.j1.saturating_sub(self.j0) as f64 * grid.spacing(Axis::Y)
    }
}

/// Which two window sides the cut must separate. The separated sides are the
/// ones the crack normal points at: `NormalY` separates top from bottom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutOrientation {
    NormalY,
    NormalX,
}

/// Surface measure of an edge's dual face clipped to a window.
pub fn window_surface_measure(grid: &Grid, window: &Window, e: EdgeId) -> f64 {
    let (a, b) = grid.edge_endpoints(e);
    let (ia, ja) = grid.node_coords(a);
    let (ib, jb) = grid.node_coords(b);
    match grid.edge_axis(e) {
        Axis::X => {
            // dual face is vertical; clipped at window rows
            debug_assert_eq!(ja, jb);
            let interior = ja > window.j0 && ja < window.j1;
            let h = grid.spacing(Axis::Y);
            if interior {
                h
            } else {
                0.5 * h
            }
        }
        Axis::Y => {
            debug_assert_eq!(ia, ib);
            let interior = ia > window.i0 && ia < window.i1;
            let h = grid.spacing(Axis::X);
            if interior {
                h
            } else {
                0.5 * h
            }
        }
    }
}

/// A source/sink separation problem on a grid window with per-edge weights
/// w(e) = kappa(e) * measure(e), zeroed on the discounted crack.
pub struct CutProblem<'a> {
    grid: &'a Grid,
    window: Window,
    orientation: CutOrientation,
    /// (edge, compact endpoints, weight)
    arcs: Vec<(EdgeId, u32, u32, f64)>,
    sources: Vec<u32>,
    sinks: Vec<u32>,
    n_nodes: usize,
    cross_section: f64,
}

/// Outcome of one minimum-cut evaluation with its duality certificate.
#[derive(Clone, Debug)]
pub struct MinCutOutcome {
    /// Sum of weights over the crossing edges.
    pub cut_cost: f64,
    /// Max-flow value.
    pub flow_value: f64,
    pub cut_edges: Vec<EdgeId>,
    /// Set when the source or sink side of the window was empty.
    pub degenerate: bool,
}

impl MinCutOutcome {
    pub fn duality_gap(&self) -> f64 {
        (self.cut_cost - self.flow_value).abs() / self.cut_cost.abs().max(1.0)
    }
}

impl<'a> CutProblem<'a> {
    /// Builds the cut problem. `kappa` gives the toughness per edge and
    /// `discounted` marks edges of the current crack K_n (zero weight).
    pub fn build(
        grid: &'a Grid,
        window: Window,
        orientation: CutOrientation,
        kappa: &dyn Fn(EdgeId) -> f64,
        discounted: &dyn Fn(EdgeId) -> bool,
    ) -> CutProblem<'a> {
        let counts = grid.counts();
        let mut compact: Vec<Option<u32>> = vec![None; grid.node_count()];
        let mut n_nodes = 0u32;
        if window.i0 <= window.i1 && window.j0 <= window.j1 {
            for j in window.j0..=window.j1 {
                for i in window.i0..=window.i1 {
                    compact[grid.node_id(i, j)] = Some(n_nodes);
                    n_nodes += 1;
                }
            }
        }
        let _ = counts;
        let mut arcs = Vec::new();
        for e in grid.edges() {
            let (a, b) = grid.edge_endpoints(e);
            if let (Some(ca), Some(cb)) = (compact[a], compact[b]) {
                let w = if discounted(e) {
                    0.0
                } else {
                    kappa(e) * window_surface_measure(grid, &window, e)
                };
                arcs.push((e, ca, cb, w));
            }
        }
        let mut sources = Vec::new();
        let mut sinks = Vec::new();
        let rows = if n_nodes > 0 {
            window.j0..window.j1 + 1
        } else {
            0..0
        };
        for j in rows {
            for i in window.i0..=window.i1 {
                let c = compact[grid.node_id(i, j)].unwrap();
                match orientation {
                    CutOrientation::NormalY => {
                        if j == window.j1 {
                            sources.push(c);
                        } else if j == window.j0 {
                            sinks.push(c);
                        }
                    }
                    CutOrientation::NormalX => {
                        if i == window.i1 {
                            sources.push(c);
                        } else if i == window.i0 {
                            sinks.push(c);
                        }
                    }
                }
            }
        }
        let cross_section = match orientation {
            CutOrientation::NormalY => window.width(grid),
            CutOrientation::NormalX => window.height(grid),
        };
        CutProblem {
            grid,
            window,
            orientation,
            arcs,
            sources,
            sinks,
            n_nodes: n_nodes as usize,
            cross_section,
        }
    }

    pub fn cross_section(&self) -> f64 {
        self.cross_section
    }

    /// Exact minimum cut over floating-point weights.
    pub fn min_cut(&self) -> MinCutOutcome {
        if self.sources.is_empty() || self.sinks.is_empty() {
            return MinCutOutcome {
                cut_cost: 0.0,
                flow_value: 0.0,
                cut_edges: Vec::new(),
                degenerate: true,
            };
        }
        let wmax = self.arcs.iter().fold(0.0f64, |m, a| m.max(a.3));
        let floor = 1e-12 * wmax.max(1e-300);
        let s = self.n_nodes as u32;
        let t = s + 1;
        let mut net = FlowNetwork::<f64>::new(self.n_nodes + 2, floor);
        for &(_, ca, cb, w) in &self.arcs {
            net.add_arc_pair(ca, cb, w, w);
        }
        let huge = self.arcs.iter().map(|a| a.3).sum::<f64>() + 1.0;
        for &src in &self.sources {
            net.add_arc_pair(s, src, huge, 0.0);
        }
        for &snk in &self.sinks {
            net.add_arc_pair(snk, t, huge, 0.0);
        }
        let flow = net.max_flow(s, t);
        let side = net.source_side(s);
        let mut cut_cost = 0.0;
        let mut cut_edges = Vec::new();
        for &(e, ca, cb, w) in &self.arcs {
            if side[ca as usize] != side[cb as usize] {
                cut_cost += w;
                cut_edges.push(e);
            }
        }
        MinCutOutcome {
            cut_cost,
            flow_value: flow,
            cut_edges,
            degenerate: false,
        }
    }

    /// Minimum cut over integer-scaled weights: weights are rounded to
    /// `w * scale` and the flow/cut equality is exact in u64 arithmetic.
    pub fn min_cut_integer(&self, scale: f64) -> (u64, u64, Vec<EdgeId>) {
        if self.sources.is_empty() || self.sinks.is_empty() {
            return (0, 0, Vec::new());
        }
        let s = self.n_nodes as u32;
        let t = s + 1;
        let mut net = FlowNetwork::<u64>::new(self.n_nodes + 2, 0u64);
        let quant = |w: f64| -> u64 { (w * scale).round() as u64 };
        let mut total = 0u64;
        for &(_, ca, cb, w) in &self.arcs {
            let q = quant(w);
            total = total.saturating_add(q);
            net.add_arc_pair(ca, cb, q, q);
        }
        let huge = total + 1;
        for &src in &self.sources {
            net.add_arc_pair(s, src, huge, 0);
        }
        for &snk in &self.sinks {
            net.add_arc_pair(snk, t, huge, 0);
        }
        let flow = net.max_flow(s, t);
        let side = net.source_side(s);
        let mut cost = 0u64;
        let mut cut_edges = Vec::new();
        for &(e, ca, cb, w) in &self.arcs {
            if side[ca as usize] != side[cb as usize] {
                cost += quant(w);
                cut_edges.push(e);
            }
        }
        (flow, cost, cut_edges)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn orientation(&self) -> CutOrientation {
        self.orientation
    }

    pub fn grid(&self) -> &Grid {
        self.grid
    }
}

/// Discounted surface functional of a two-valued field: total weight of its
/// jump edges outside K_n, within the window.
pub fn surface_functional(
    grid: &Grid,
    values: &[f64],
    window: &Window,
    kappa: &dyn Fn(EdgeId) -> f64,
    discounted: &dyn Fn(EdgeId) -> bool,
) -> Result<f64> {
    let mut seen = [false, false];
    let mut levels = [0.0f64; 2];
    for j in window.j0..=window.j1 {
        for i in window.i0..=window.i1 {
            let v = values[grid.node_id(i, j)];
            if seen[0] && v == levels[0] || seen[1] && v == levels[1] {
                continue;
            }
            if !seen[0] {
                seen[0] = true;
                levels[0] = v;
            } else if !seen[1] {
                seen[1] = true;
                levels[1] = v;
            } else {
                return Err(Error::invariant(format!(
                    "surface functional needs a two-valued field, found a third level {v}"
                )));
            }
        }
    }
    let mut total = 0.0;
    for e in grid.edges() {
        let (a, b) = grid.edge_endpoints(e);
        let (ia, ja) = grid.node_coords(a);
        let (ib, jb) = grid.node_coords(b);
        if !window.contains(ia, ja) || !window.contains(ib, jb) {
            continue;
        }
        if values[a] != values[b] && !discounted(e) {
            total += kappa(e) * window_surface_measure(grid, window, e);
        }
    }
    Ok(total)
}

/// Convenience: cut problem over a medium with a crack discount.
pub fn crack_discounted_problem<'a>(
    grid: &'a Grid,
    medium: &'a Medium,
    crack: &'a CrackState,
    window: Window,
    orientation: CutOrientation,
) -> CutProblem<'a> {
    CutProblem::build(grid, window, orientation, &|e| medium.kappa_edge(e), &|e| {
        crack.is_cracked(e)
    })
}

// ---------------------------------------------------------------------------
// Crack sequence generators and the sigma probe
// ---------------------------------------------------------------------------

/// Named crack-sequence generators on the square (-1,1)^2, realized as edge
/// sets on a grid with extents [2,2] (physical coordinates are shifted by 1).
#[derive(Clone, Debug)]
pub enum SequenceDescriptor {
    /// 2n+1 vertical teeth of height 2/n on the midline.
    Teeth,
    /// Horizontal midline sub-segments covering a length fraction `a` of each
    /// of the n periods.
    Fraction { a: f64 },
    /// The full midline, independent of n.
    FixedLine,
    /// Explicit edge list, independent of n.
    CustomEdges { edges: Vec<EdgeId> },
}

impl SequenceDescriptor {
    pub fn name(&self) -> String {
        match self {
            SequenceDescriptor::Teeth => "teeth".into(),
            SequenceDescriptor::Fraction { a } => format!("fraction({a})"),
            SequenceDescriptor::FixedLine => "fixed-line".into(),
            SequenceDescriptor::CustomEdges { .. } => "custom".into(),
        }
    }

    /// The discounted edge set K_n.
    pub fn edges_at(&self, grid: &Grid, n: usize) -> Vec<EdgeId> {
        let hx = grid.spacing(Axis::X);
        let hy = grid.spacing(Axis::Y);
        let counts = grid.counts();
        let mut edges = Vec::new();
        match self {
            SequenceDescriptor::FixedLine => {
                let jrow = midline_edge_row(grid);
                for i in 0..counts[0] {
                    edges.push(grid.y_edge_id(i, jrow));
                }
            }
            SequenceDescriptor::Teeth => {
                // vertical segments at x = i/n (physical), |y| <= 1/n
                let nn = n as i64;
                for i in -nn..=nn {
                    let x_phys = i as f64 / n as f64;
                    let xg = x_phys + 1.0;
                    // x-edge column whose midpoint (c + 0.5) hx is nearest xg
                    let c = ((xg / hx - 0.5).round().max(0.0) as usize).min(counts[0] - 2);
                    let y_lo = 1.0 - 1.0 / n as f64;
                    let y_hi = 1.0 + 1.0 / n as f64;
                    let j_lo = (y_lo / hy).ceil() as usize;
                    let j_hi = ((y_hi / hy).floor() as usize).min(counts[1] - 1);
                    for j in j_lo..=j_hi {
                        edges.push(grid.x_edge_id(c, j));
                    }
                }
            }
            SequenceDescriptor::Fraction { a } => {
                let jrow = midline_edge_row(grid);
                let period = 2.0 / n as f64;
                for i in 0..counts[0] {
                    let x_phys = i as f64 * hx - 1.0;
                    let s = (x_phys + 1.0).rem_euclid(period);
                    if s < a * period {
                        edges.push(grid.y_edge_id(i, jrow));
                    }
                }
            }
            SequenceDescriptor::CustomEdges { edges: fixed } => {
                edges.extend_from_slice(fixed);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

/// y-edge row whose midpoints sit nearest the physical midline y = 0
/// (grid y = 1).
fn midline_edge_row(grid: &Grid) -> usize {
    let hy = grid.spacing(Axis::Y);
    let counts = grid.counts();
    (((1.0 / hy) - 0.5).round().max(0.0) as usize).min(counts[1] - 2)
}

/// One probe record: density estimates over the n list at a fixed window.
#[derive(Clone, Debug)]
pub struct SigmaProbeReport {
    pub generator: String,
    /// Physical window center in (-1,1)^2.
    pub center: [f64; 2],
    pub radius: f64,
    /// Normal direction probed.
    pub normal: Axis,
    /// (n, density estimate) pairs, in the order requested.
    pub estimates: Vec<(usize, f64)>,
    /// Density at the diagonal index n(rho) = ceil(1/rho^2).
    pub diagonal_density: f64,
    /// Classified as belonging to the sigma-limit for this direction.
    pub in_sigma_limit: bool,
}

/// Probe configuration. `tau` is the classification threshold on the
/// diagonal density (default 0.05 * alpha).
#[derive(Clone, Debug)]
pub struct SigmaProbeConfig {
    pub centers: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
    pub n_list: Vec<usize>,
    pub normal: Axis,
    pub tau: f64,
}

/// Runs windowed density probes for a crack sequence generator.
///
/// For every center and radius, the estimate is min-cut cost over the window
/// divided by the window cross-section, with K_n discounted. The classifier
/// follows the diagonal n(rho) = ceil(1/rho^2), approximating the order
/// "n to infinity first, then rho to 0".
pub fn sigma_probe(
    grid: &Grid,
    descriptor: &SequenceDescriptor,
    kappa: &(dyn Fn(EdgeId) -> f64 + Sync),
    cfg: &SigmaProbeConfig,
) -> Result<Vec<SigmaProbeReport>> {
    let h = grid.spacing(Axis::X).max(grid.spacing(Axis::Y));
    for &rho in &cfg.radii {
        if rho < 4.0 * h {
            return Err(Error::config(format!(
                "probe radius {rho} under-resolved: need rho >= 4h = {}",
                4.0 * h
            )));
        }
    }
    let mut jobs = Vec::new();
    for &center in &cfg.centers {
        for &rho in &cfg.radii {
            jobs.push((center, rho));
        }
    }
    let reports: Vec<SigmaProbeReport> = jobs
        .par_iter()
        .map(|&(center, rho)| {
            let grid_center = [center[0] + 1.0, center[1] + 1.0];
            let window = Window::around(grid, grid_center, rho);
            let orientation = match cfg.normal {
                Axis::Y => CutOrientation::NormalY,
                Axis::X => CutOrientation::NormalX,
            };
            let n_diag = (1.0 / (rho * rho)).ceil() as usize;
            let mut all_n: Vec<usize> = cfg.n_list.clone();
            if !all_n.contains(&n_diag) {
                all_n.push(n_diag);
            }
            let mut estimates = Vec::with_capacity(all_n.len());
            let mut diagonal_density = f64::NAN;
            for &n in &all_n {
                let kn = descriptor.edges_at(grid, n);
                let mut mask = vec![false; grid.edge_count()];
                for &e in &kn {
                    mask[e] = true;
                }
                let problem = CutProblem::build(grid, window, orientation, kappa, &|e| mask[e]);
                let outcome = problem.min_cut();
                let density = outcome.cut_cost / problem.cross_section();
                if n == n_diag {
                    diagonal_density = density;
                }
                if cfg.n_list.contains(&n) {
                    estimates.push((n, density));
                }
            }
            SigmaProbeReport {
                generator: descriptor.name(),
                center,
                radius: rho,
                normal: cfg.normal,
                estimates,
                diagonal_density,
                in_sigma_limit: diagonal_density <= cfg.tau,
            }
        })
        .collect();
    Ok(reports)
}
