//! Effective homogenized densities of a periodic medium.
//!
//! The effective bulk density at mean gradient xi is the minimum of the
//! discrete cell energy over periodic correctors on the unit torus. The
//! effective toughness in a direction is the minimal average cost per unit
//! length of a periodic cut across a strip of unit cells; oblique directions
//! use a sheared periodic identification restricted to rational slopes.
//!
//! For p != 2 the lattice bulk model realizes the separable power family
//! a(x) (|xi_1|^p + |xi_2|^p); at p = 2 this is the isotropic a(x)|xi|^2, and
//! the quadratic benchmarks below are meaningful against classical effective
//! coefficients.

use crate::error::{Error, Result};
use crate::grid::Axis;
use crate::medium::CellPattern;
use crate::mincut::FlowNetwork;
use crate::sparse::{nd_order_torus, restrict_order, SpdGraphPattern};
use rayon::prelude::*;

/// Periodic unit cell of a composite: bulk and toughness patterns plus the
/// growth exponent.
#[derive(Clone, Debug)]
pub struct UnitCell {
    pub dim: usize,
    pub bulk: CellPattern,
    pub toughness: CellPattern,
    pub toughness_anisotropy: [f64; 2],
    pub p: f64,
}

impl UnitCell {
    pub fn validate(&self) -> Result<()> {
        if self.dim != 1 && self.dim != 2 {
            return Err(Error::config("unit cell dimension must be 1 or 2"));
        }
        self.bulk.validate()?;
        self.toughness.validate()?;
        if !(self.p >= 1.0) {
            return Err(Error::config("growth exponent must be >= 1"));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        let at = self.toughness.min_value()
            * self.toughness_anisotropy[0].min(self.toughness_anisotropy[1]);
        self.bulk.min_value().min(at)
    }

    pub fn beta(&self) -> f64 {
        let at = self.toughness.max_value()
            * self.toughness_anisotropy[0].max(self.toughness_anisotropy[1]);
        self.bulk.max_value().max(at)
    }
}

// ---------------------------------------------------------------------------
// Bulk: periodic corrector minimization on the torus
// ---------------------------------------------------------------------------

struct TorusEdge {
    a: u32,
    b: u32,
    /// Energy coefficient: a(e) * vol / h^p.
    coeff: f64,
    /// Difference of the affine part xi . x across the edge.
    affine: f64,
}

struct TorusProblem {
    n: usize,
    edges: Vec<TorusEdge>,
    p: f64,
    pattern: SpdGraphPattern,
    /// compact index of every node except the pinned node 0
    compact: Vec<Option<u32>>,
}

impl TorusProblem {
    fn build(cell: &UnitCell, xi: [f64; 2], resolution: usize) -> Result<TorusProblem> {
        let r = resolution;
        let h = 1.0 / r as f64;
        let p = cell.p;
        let (n, mut edges) = if cell.dim == 1 {
            let mut edges = Vec::with_capacity(r);
            for i in 0..r {
                let a_mid = cell.bulk.eval((i as f64 + 0.5) * h, 0.0);
                edges.push(TorusEdge {
                    a: i as u32,
                    b: ((i + 1) % r) as u32,
                    coeff: a_mid * h / h.powf(p),
                    affine: xi[0] * h,
                });
            }
            (r, edges)
        } else {
            let n = r * r;
            let mut a_cells = vec![0.0f64; n];
            for j in 0..r {
                for i in 0..r {
                    a_cells[j * r + i] = cell.bulk.eval((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                }
            }
            let cell_at = |i: usize, j: usize| a_cells[(j % r) * r + (i % r)];
            let vol = h * h;
            let mut edges = Vec::with_capacity(2 * n);
            for j in 0..r {
                for i in 0..r {
                    let node = (j * r + i) as u32;
                    // x-edge: between the cells below and above it
                    let ax = 0.5 * (cell_at(i, j + r - 1) + cell_at(i, j));
                    edges.push(TorusEdge {
                        a: node,
                        b: (j * r + (i + 1) % r) as u32,
                        coeff: ax * vol / h.powf(p),
                        affine: xi[0] * h,
                    });
                    // y-edge: between the cells left and right of it
                    let ay = 0.5 * (cell_at(i + r - 1, j) + cell_at(i, j));
                    edges.push(TorusEdge {
                        a: node,
                        b: (((j + 1) % r) * r + i) as u32,
                        coeff: ay * vol / h.powf(p),
                        affine: xi[1] * h,
                    });
                }
            }
            (n, edges)
        };
        edges.shrink_to_fit();

        // pin corrector value at node 0
        let mut compact: Vec<Option<u32>> = vec![None; n];
        for node in 1..n {
            compact[node] = Some((node - 1) as u32);
        }
        let mut pattern_edges = Vec::with_capacity(edges.len());
        for e in &edges {
            if let (Some(ca), Some(cb)) = (compact[e.a as usize], compact[e.b as usize]) {
                pattern_edges.push((ca, cb));
            }
        }
        let order_full = if cell.dim == 1 {
            nd_order_torus(r, 1)
        } else {
            nd_order_torus(r, r)
        };
        let order = restrict_order(&order_full, &compact, n - 1);
        let pattern = SpdGraphPattern::new(n - 1, pattern_edges, order)?;
        Ok(TorusProblem {
            n,
            edges,
            p,
            pattern,
            compact,
        })
    }

    fn energy(&self, phi: &[f64]) -> f64 {
        let p = self.p;
        let mut e = 0.0;
        if p == 2.0 {
            for ed in &self.edges {
                let d = ed.affine + phi[ed.b as usize] - phi[ed.a as usize];
                e += ed.coeff * d * d;
            }
        } else {
            for ed in &self.edges {
                let d = (ed.affine + phi[ed.b as usize] - phi[ed.a as usize]).abs();
                e += ed.coeff * d.powf(p);
            }
        }
        e
    }

    fn gradient(&self, phi: &[f64], g: &mut [f64]) {
        let p = self.p;
        for v in g.iter_mut() {
            *v = 0.0;
        }
        for ed in &self.edges {
            let d = ed.affine + phi[ed.b as usize] - phi[ed.a as usize];
            let t = if p == 2.0 {
                2.0 * ed.coeff * d
            } else {
                p * ed.coeff * d.abs().powf(p - 1.0) * d.signum()
            };
            if let Some(cb) = self.compact[ed.b as usize] {
                g[cb as usize] += t;
            }
            if let Some(ca) = self.compact[ed.a as usize] {
                g[ca as usize] -= t;
            }
        }
    }

    /// Quadratic solve (p = 2) or damped Newton, returning min energy.
    fn minimize(&self) -> Result<f64> {
        let n = self.n;
        let nf = n - 1;
        let quad_weights = |phi: Option<&[f64]>, floor: f64| -> (Vec<f64>, Vec<f64>) {
            let p = self.p;
            let mut w = Vec::with_capacity(self.edges.len());
            let mut dd = vec![0.0f64; nf];
            for ed in &self.edges {
                let base = match phi {
                    None => ed.coeff,
                    Some(ph) => {
                        let d = (ed.affine + ph[ed.b as usize] - ph[ed.a as usize])
                            .abs()
                            .max(floor);
                        p * (p - 1.0) * ed.coeff * d.powf(p - 2.0) * 0.5
                    }
                };
                match (self.compact[ed.a as usize], self.compact[ed.b as usize]) {
                    (Some(_), Some(_)) => w.push(base),
                    (Some(ca), None) => {
                        dd[ca as usize] += base;
                    }
                    (None, Some(cb)) => {
                        dd[cb as usize] += base;
                    }
                    (None, None) => {}
                }
            }
            (w, dd)
        };

        if self.p == 2.0 {
            let (w, dd) = quad_weights(None, 0.0);
            let factor = self.pattern.factor(&w, &dd)?;
            // rhs from the affine term: -dE/dphi at phi = 0, halved (E = phi^T A phi - 2 b phi + c)
            let mut phi0 = vec![0.0f64; n];
            let mut g = vec![0.0f64; nf];
            self.gradient(&phi0, &mut g);
            let b: Vec<f64> = g.iter().map(|v| -0.5 * v).collect();
            let sol = self.pattern.solve(&factor, &b);
            for node in 1..n {
                phi0[node] = sol[node - 1];
            }
            return Ok(self.energy(&phi0));
        }

        // damped Newton for p != 2
        let mut phi = vec![0.0f64; n];
        let mut g = vec![0.0f64; nf];
        let floor = 1e-12;
        let mut energy = self.energy(&phi);
        for _ in 0..200 {
            self.gradient(&phi, &mut g);
            let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gn <= 1e-10 {
                return Ok(energy);
            }
            let (w, dd) = quad_weights(Some(&phi), floor);
            // Hessian weights were halved above to share the quadratic
            // assembly; undo the factor here.
            let w: Vec<f64> = w.iter().map(|v| 2.0 * v).collect();
            let dd: Vec<f64> = dd.iter().map(|v| 2.0 * v).collect();
            let factor = self.pattern.factor(&w, &dd)?;
            let step = self.pattern.solve(&factor, &g);
            let descent: f64 = g.iter().zip(&step).map(|(a, b)| a * b).sum();
            let mut t = 1.0;
            let mut ok = false;
            for _ in 0..60 {
                let mut trial = phi.clone();
                for node in 1..n {
                    trial[node] -= t * step[node - 1];
                }
                let et = self.energy(&trial);
                if et <= energy - 1e-4 * t * descent {
                    phi = trial;
                    energy = et;
                    ok = true;
                    break;
                }
                t *= 0.5;
            }
            if !ok {
                if gn <= 1e-8 {
                    return Ok(energy);
                }
                return Err(Error::numerical(format!(
                    "cell corrector line search stagnated, |grad| = {gn:.3e}"
                )));
            }
        }
        self.gradient(&phi, &mut g);
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        Err(Error::numerical(format!(
            "cell corrector did not converge, |grad| = {gn:.3e}"
        )))
    }
}

/// Effective bulk density f_hom(xi) by periodic corrector minimization.
pub fn f_hom_cell(cell: &UnitCell, xi: [f64; 2], resolution: usize) -> Result<f64> {
    cell.validate()?;
    if resolution < 16 {
        return Err(Error::config(format!(
            "cell resolution must be >= 16, got {resolution}"
        )));
    }
    if !(xi[0].is_finite() && xi[1].is_finite()) {
        return Err(Error::config("xi must be finite"));
    }
    TorusProblem::build(cell, xi, resolution)?.minimize()
}

// ---------------------------------------------------------------------------
// Surface: periodic strip cuts
// ---------------------------------------------------------------------------

/// Rational cut direction: the cut advances `run` periods along `travel`
/// while rising `rise` periods sideways. The crack normal is orthogonal to
/// the mean interface direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutDirection {
    pub travel: Axis,
    pub rise: i64,
    pub run: u32,
}

impl CutDirection {
    pub fn axis(travel: Axis) -> CutDirection {
        CutDirection {
            travel,
            rise: 0,
            run: 1,
        }
    }

    /// Unit normal of the crack surface.
    pub fn normal(&self) -> [f64; 2] {
        let m = self.run as f64;
        let q = self.rise as f64;
        let len = (m * m + q * q).sqrt();
        match self.travel {
            Axis::X => [-q / len, m / len],
            Axis::Y => [m / len, -q / len],
        }
    }

    /// Interface length per period of travel.
    fn length_per_strip(&self) -> f64 {
        let m = self.run as f64;
        let q = self.rise as f64;
        (m * m + q * q).sqrt()
    }
}

/// Effective toughness g_hom(nu) as the minimal average cost of a periodic
/// cut across a sheared strip of `dir.run` unit cells, `v_periods` tall.
pub fn g_hom_cell(
    cell: &UnitCell,
    dir: CutDirection,
    resolution: usize,
    v_periods: usize,
) -> Result<f64> {
    cell.validate()?;
    if resolution < 4 {
        return Err(Error::config("strip resolution must be >= 4"));
    }
    if dir.run == 0 {
        return Err(Error::config("cut direction needs run >= 1"));
    }
    if cell.dim == 1 {
        // a 1D crack is a point: minimal kappa over the cell
        let r = resolution;
        let h = 1.0 / r as f64;
        let mut min = f64::MAX;
        for i in 0..r {
            min = min.min(cell.toughness.eval((i as f64 + 0.5) * h, 0.0));
        }
        return Ok(min);
    }
    let r = resolution;
    let h = 1.0 / r as f64;
    let m = dir.run as usize;
    let q = dir.rise;
    let v = v_periods.max(q.unsigned_abs() as usize + 2);
    let width = m * r; // columns, wrapped with shear
    let height = v * r + 1; // rows, open

    // node (i, j) -> id j * width + i; travel axis mapped to "x"
    let node = |i: usize, j: usize| -> u32 { (j * width + i) as u32 };
    let qr = q * r as i64;

    // kappa evaluated in unit-cell coordinates; axes swap for travel = Y
    let kap = |x: f64, y: f64, axis: Axis| -> f64 {
        let (cx, cy, phys_axis) = match dir.travel {
            Axis::X => (x, y, axis),
            Axis::Y => (y, x, if axis == Axis::X { Axis::Y } else { Axis::X }),
        };
        let aniso = match phys_axis {
            Axis::X => cell.toughness_anisotropy[0],
            Axis::Y => cell.toughness_anisotropy[1],
        };
        aniso * cell.toughness.eval(cx, cy)
    };

    let n = width * height;
    let s = n as u32;
    let t = s + 1;
    // Sheared wrap targets outside the strip stand for nodes deep in the
    // source or sink region; routing them to the terminals keeps the
    // cylinder geometry intact near the open ends.
    let mut caps: Vec<(u32, u32, f64)> = Vec::with_capacity(2 * width * height);
    for j in 0..height {
        for i in 0..width {
            if i + 1 < width {
                let w = kap((i as f64 + 0.5) * h, j as f64 * h, Axis::X) * h;
                caps.push((node(i, j), node(i + 1, j), w));
            }
            if j + 1 < height {
                let w = kap(i as f64 * h, (j as f64 + 0.5) * h, Axis::Y) * h;
                caps.push((node(i, j), node(i, j + 1), w));
            }
        }
    }
    // Sheared wrap edges (width-1, j) -- (0, j - qr) over all rows of the
    // infinite strip; endpoints beyond the open ends stand for nodes deep in
    // the source (above) or sink (below) region and attach to the terminals.
    let terminal = |row: i64| -> u32 {
        if row < 0 {
            t
        } else {
            s
        }
    };
    let hh = height as i64;
    for j in qr.min(0)..hh + qr.max(0) {
        let brow = j - qr;
        let a = if (0..hh).contains(&j) {
            node(width - 1, j as usize)
        } else {
            terminal(j)
        };
        let b = if (0..hh).contains(&brow) {
            node(0, brow as usize)
        } else {
            terminal(brow)
        };
        if a >= s && b >= s {
            continue;
        }
        let w = kap((width as f64 - 0.5) * h, j as f64 * h, Axis::X) * h;
        caps.push((a, b, w));
    }
    let wmax = caps.iter().fold(0.0f64, |mx, c| mx.max(c.2));
    let mut net = FlowNetwork::<f64>::new(n + 2, 1e-12 * wmax);
    for &(a, b, w) in &caps {
        net.add_arc_pair(a, b, w, w);
    }
    let huge = caps.iter().map(|c| c.2).sum::<f64>() + 1.0;
    for i in 0..width {
        net.add_arc_pair(s, node(i, height - 1), huge, 0.0);
        net.add_arc_pair(node(i, 0), t, huge, 0.0);
    }
    let flow = net.max_flow(s, t);
    let side = net.source_side(s);
    let mut cost = 0.0;
    for &(a, b, w) in &caps {
        if side[a as usize] != side[b as usize] {
            cost += w;
        }
    }
    // certificate: flow and cut must agree to rounding
    let gap = (cost - flow).abs() / cost.abs().max(1.0);
    if gap > 1e-6 {
        return Err(Error::numerical(format!(
            "strip cut duality gap {gap:.3e} exceeds 1e-6"
        )));
    }
    Ok(cost / dir.length_per_strip())
}

// ---------------------------------------------------------------------------
// Tables and checks
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct BulkEntry {
    pub xi: [f64; 2],
    pub value: f64,
    pub resolution: usize,
    /// |value(R) - value(R/2)|, a mesh convergence diagnostic.
    pub refinement_delta: f64,
}

#[derive(Clone, Debug)]
pub struct SurfaceEntry {
    pub normal: [f64; 2],
    pub direction: CutDirection,
    pub value: f64,
    pub resolution: usize,
    pub refinement_delta: f64,
}

#[derive(Clone, Debug)]
pub struct EffectiveDensityTable {
    pub bulk: Vec<BulkEntry>,
    pub surface: Vec<SurfaceEntry>,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Table sampling plan: magnitudes are chosen so that midpoints of
/// consecutive pairs are themselves samples, which feeds the convexity check
/// without extra solves.
#[derive(Clone, Debug)]
pub struct TablePlan {
    pub n_directions: usize,
    pub magnitudes: Vec<f64>,
    pub resolution: usize,
    pub strip_v: usize,
    pub max_run: u32,
}

impl Default for TablePlan {
    fn default() -> Self {
        TablePlan {
            n_directions: 16,
            magnitudes: vec![0.5, 1.0, 1.5, 2.0],
            resolution: 64,
            strip_v: 3,
            max_run: 4,
        }
    }
}

/// All rational cut directions with run <= max_run, both travel axes,
/// deduplicated.
pub fn rational_directions(max_run: u32) -> Vec<CutDirection> {
    let mut dirs = vec![CutDirection::axis(Axis::X), CutDirection::axis(Axis::Y)];
    for m in 1..=max_run {
        for q in 1..=m as i64 {
            if gcd(q as u64, m as u64) != 1 {
                continue;
            }
            dirs.push(CutDirection {
                travel: Axis::X,
                rise: q,
                run: m,
            });
            if q != m as i64 {
                dirs.push(CutDirection {
                    travel: Axis::Y,
                    rise: q,
                    run: m,
                });
            }
        }
    }
    dirs
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Builds the effective density table, entries computed in parallel with a
/// deterministic keyed merge (ordered collect).
pub fn build_table(cell: &UnitCell, plan: &TablePlan) -> Result<EffectiveDensityTable> {
    cell.validate()?;
    let mut xis: Vec<[f64; 2]> = Vec::new();
    if cell.dim == 1 {
        for &mag in &plan.magnitudes {
            xis.push([mag, 0.0]);
        }
    } else {
        for k in 0..plan.n_directions {
            let angle = std::f64::consts::PI * k as f64 / plan.n_directions as f64;
            for &mag in &plan.magnitudes {
                xis.push([mag * angle.cos(), mag * angle.sin()]);
            }
        }
    }
    let bulk: Vec<BulkEntry> = xis
        .par_iter()
        .map(|&xi| -> Result<BulkEntry> {
            let value = f_hom_cell(cell, xi, plan.resolution)?;
            let coarse = f_hom_cell(cell, xi, (plan.resolution / 2).max(16))?;
            Ok(BulkEntry {
                xi,
                value,
                resolution: plan.resolution,
                refinement_delta: (value - coarse).abs(),
            })
        })
        .collect::<Result<_>>()?;

    let dirs = if cell.dim == 1 {
        vec![CutDirection::axis(Axis::X)]
    } else {
        rational_directions(plan.max_run)
    };
    let surface: Vec<SurfaceEntry> = dirs
        .par_iter()
        .map(|&dir| -> Result<SurfaceEntry> {
            let value = g_hom_cell(cell, dir, plan.resolution, plan.strip_v)?;
            let coarse = g_hom_cell(cell, dir, (plan.resolution / 2).max(4), plan.strip_v)?;
            Ok(SurfaceEntry {
                normal: dir.normal(),
                direction: dir,
                value,
                resolution: plan.resolution,
                refinement_delta: (value - coarse).abs(),
            })
        })
        .collect::<Result<_>>()?;

    Ok(EffectiveDensityTable {
        bulk,
        surface,
        p: cell.p,
        alpha: cell.alpha(),
        beta: cell.beta(),
    })
}

impl EffectiveDensityTable {
    /// Growth bounds alpha ||xi||_p^p <= f_hom <= beta ||xi||_p^p and
    /// alpha <= g_hom <= beta (with anisotropy folded into the bounds).
    pub fn check_bounds(&self) -> Result<()> {
        let p = self.p;
        for e in &self.bulk {
            let norm_p = (e.xi[0].abs().powf(p) + e.xi[1].abs().powf(p)).max(1e-300);
            let tol = 1e-9 * norm_p;
            if e.value < self.alpha * norm_p - tol || e.value > self.beta * norm_p + tol {
                return Err(Error::invariant(format!(
                    "f_hom({:?}) = {} violates [{}, {}] * |xi|^p",
                    e.xi,
                    e.value,
                    self.alpha * norm_p,
                    self.beta * norm_p
                )));
            }
        }
        for e in &self.surface {
            // lattice cuts measure lines in the l1 metric; a unit-length
            // interface of rational slope carries up to |m|+|q| lattice length
            let l1_factor = {
                let m = e.direction.run as f64;
                let q = e.direction.rise as f64;
                (m + q.abs()) / (m * m + q * q).sqrt()
            };
            let tol = 1e-9 * self.beta;
            if e.value < self.alpha - tol || e.value > self.beta * l1_factor + tol {
                return Err(Error::invariant(format!(
                    "g_hom({:?}) = {} violates [{}, {}]",
                    e.normal,
                    e.value,
                    self.alpha,
                    self.beta * l1_factor
                )));
            }
        }
        Ok(())
    }

    /// Classical two-phase bounds at p = 2: the volume-weighted harmonic
    /// mean bounds the effective coefficient from below, the arithmetic mean
    /// from above (the zero corrector is an admissible competitor, so the
    /// upper bound is exact on the lattice).
    pub fn check_wiener_bounds(&self, cell: &UnitCell, resolution: usize) -> Result<()> {
        if self.p != 2.0 {
            return Ok(());
        }
        let r = resolution;
        let h = 1.0 / r as f64;
        let mut arith = 0.0;
        let mut harm_inv = 0.0;
        let mut count = 0usize;
        for j in 0..(if cell.dim == 2 { r } else { 1 }) {
            for i in 0..r {
                let v = cell.bulk.eval((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                arith += v;
                harm_inv += 1.0 / v;
                count += 1;
            }
        }
        arith /= count as f64;
        let harm = count as f64 / harm_inv;
        for e in &self.bulk {
            let norm2 = e.xi[0] * e.xi[0] + e.xi[1] * e.xi[1];
            if norm2 < 1e-24 {
                continue;
            }
            let coeff = e.value / norm2;
            let tol = 1e-9 * arith;
            if coeff < harm - tol || coeff > arith + tol {
                return Err(Error::invariant(format!(
                    "effective coefficient {coeff} at xi = {:?} outside the \
                     harmonic/arithmetic bounds [{harm}, {arith}]",
                    e.xi
                )));
            }
        }
        Ok(())
    }

    /// Midpoint convexity along each sampled direction.
    pub fn check_convexity(&self, tol: f64) -> Result<()> {
        let mut by_dir: std::collections::BTreeMap<i64, Vec<(f64, f64)>> =
            std::collections::BTreeMap::new();
        for e in &self.bulk {
            let mag = (e.xi[0] * e.xi[0] + e.xi[1] * e.xi[1]).sqrt();
            if mag < 1e-12 {
                continue;
            }
            let ang = e.xi[1].atan2(e.xi[0]);
            let key = (ang * 1e9).round() as i64;
            by_dir.entry(key).or_default().push((mag, e.value));
        }
        for (_, mut samples) in by_dir {
            samples.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in samples.windows(3) {
                // only triples with the middle sample at the exact midpoint
                if ((w[0].0 + w[2].0) * 0.5 - w[1].0).abs() > 1e-9 {
                    continue;
                }
                let mid = 0.5 * (w[0].1 + w[2].1);
                if w[1].1 > mid + tol * mid.abs().max(1.0) {
                    return Err(Error::invariant(format!(
                        "f_hom not midpoint convex: f({}) = {} > {}",
                        w[1].0, w[1].1, mid
                    )));
                }
            }
        }
        Ok(())
    }

    /// p-homogeneity f_hom(c xi) = c^p f_hom(xi) across sampled magnitudes.
    pub fn check_homogeneity(&self, tol: f64) -> Result<()> {
        let p = self.p;
        let mut by_dir: std::collections::BTreeMap<i64, Vec<(f64, f64)>> =
            std::collections::BTreeMap::new();
        for e in &self.bulk {
            let mag = (e.xi[0] * e.xi[0] + e.xi[1] * e.xi[1]).sqrt();
            if mag < 1e-12 {
                continue;
            }
            let ang = e.xi[1].atan2(e.xi[0]);
            let key = (ang * 1e9).round() as i64;
            by_dir.entry(key).or_default().push((mag, e.value));
        }
        for (_, samples) in by_dir {
            let (m0, v0) = samples[0];
            for &(m, v) in &samples[1..] {
                let predicted = v0 * (m / m0).powf(p);
                if ((v - predicted) / predicted.abs().max(1e-300)).abs() > tol {
                    return Err(Error::invariant(format!(
                        "f_hom not p-homogeneous: f at |xi|={m} is {v}, predicted {predicted}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cut-metric subadditivity of the 1-homogeneous extension of g_hom,
    /// checked on direction pairs whose sum direction is also sampled.
    pub fn check_subadditivity(&self, tol: f64) -> Result<()> {
        let ext: Vec<([f64; 2], f64)> = self.surface.iter().map(|e| (e.normal, e.value)).collect();
        let lookup = |v: [f64; 2]| -> Option<f64> {
            let len = (v[0] * v[0] + v[1] * v[1]).sqrt();
            if len < 1e-12 {
                return Some(0.0);
            }
            let unit = [v[0] / len, v[1] / len];
            for (n, g) in &ext {
                for sign in [1.0, -1.0] {
                    if (n[0] * sign - unit[0]).abs() < 1e-9 && (n[1] * sign - unit[1]).abs() < 1e-9
                    {
                        return Some(g * len);
                    }
                }
            }
            None
        };
        for (i, (n1, _)) in ext.iter().enumerate() {
            for (n2, _) in ext.iter().skip(i + 1) {
                let sum = [n1[0] + n2[0], n1[1] + n2[1]];
                if let (Some(gs), Some(g1), Some(g2)) = (lookup(sum), lookup(*n1), lookup(*n2)) {
                    if gs > g1 + g2 + tol {
                        return Err(Error::invariant(format!(
                            "g_hom extension not subadditive at {n1:?} + {n2:?}: {gs} > {g1} + {g2}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Differentiability probe: central and one-sided difference quotients of
/// f_hom along a direction, at steps s and s/2. For a C^1 density the
/// central-minus-one-sided discrepancy shrinks at first order; a kink keeps
/// it bounded away from zero.
pub fn differentiability_probe(
    cell: &UnitCell,
    xi: [f64; 2],
    direction: [f64; 2],
    step: f64,
    resolution: usize,
) -> Result<(f64, f64)> {
    let f = |z: [f64; 2]| f_hom_cell(cell, z, resolution);
    let probe = |s: f64| -> Result<f64> {
        let xp = [xi[0] + s * direction[0], xi[1] + s * direction[1]];
        let xm = [xi[0] - s * direction[0], xi[1] - s * direction[1]];
        let f0 = f(xi)?;
        let fp = f(xp)?;
        let fm = f(xm)?;
        let central = (fp - fm) / (2.0 * s);
        let onesided = (fp - f0) / s;
        Ok((central - onesided).abs())
    };
    Ok((probe(step)?, probe(0.5 * step)?))
}

/// Report of the bulk/surface scaling check: rescaling a by c1 must rescale
/// f_hom by c1 exactly, and kappa by c2 must rescale g_hom by c2.
#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub c1: f64,
    pub c2: f64,
    pub max_rel_bulk: f64,
    pub max_rel_surface: f64,
    pub tol: f64,
    pub failures: Vec<String>,
}

impl ScalingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies that bulk and surface effective densities scale independently.
pub fn scaling_check(
    cell: &UnitCell,
    c1: f64,
    c2: f64,
    resolution: usize,
) -> Result<ScalingReport> {
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::config("scaling factors must be positive"));
    }
    let tol = 1e-10;
    let scaled = UnitCell {
        dim: cell.dim,
        bulk: cell.bulk.scaled(c1),
        toughness: cell.toughness.scaled(c2),
        toughness_anisotropy: cell.toughness_anisotropy,
        p: cell.p,
    };
    let xis: Vec<[f64; 2]> = if cell.dim == 1 {
        vec![[1.0, 0.0], [1.7, 0.0]]
    } else {
        vec![[1.0, 0.0], [0.0, 1.0], [0.6, 0.8], [1.3, -0.4]]
    };
    let mut max_rel_bulk = 0.0f64;
    let mut failures = Vec::new();
    for xi in xis {
        let base = f_hom_cell(cell, xi, resolution)?;
        let scaled_v = f_hom_cell(&scaled, xi, resolution)?;
        let rel = ((scaled_v - c1 * base) / (c1 * base).abs().max(1e-300)).abs();
        max_rel_bulk = max_rel_bulk.max(rel);
        if rel > tol {
            failures.push(format!(
                "f_hom({xi:?}): scaled {scaled_v} vs c1 * base {}",
                c1 * base
            ));
        }
    }
    let dirs = if cell.dim == 1 {
        vec![CutDirection::axis(Axis::X)]
    } else {
        vec![
            CutDirection::axis(Axis::X),
            CutDirection::axis(Axis::Y),
            CutDirection {
                travel: Axis::X,
                rise: 1,
                run: 2,
            },
        ]
    };
    let mut max_rel_surface = 0.0f64;
    for dir in dirs {
        let base = g_hom_cell(cell, dir, resolution, 3)?;
        let scaled_v = g_hom_cell(&scaled, dir, resolution, 3)?;
        let rel = ((scaled_v - c2 * base) / (c2 * base).abs().max(1e-300)).abs();
        max_rel_surface = max_rel_surface.max(rel);
        if rel > tol {
            failures.push(format!(
                "g_hom({:?}): scaled {scaled_v} vs c2 * base {}",
                dir.normal(),
                c2 * base
            ));
        }
    }
    Ok(ScalingReport {
        c1,
        c2,
        max_rel_bulk,
        max_rel_surface,
        tol,
        failures,
    })
}
