//! Microstructure-scale sweep: evolutions of a periodic medium at decreasing
//! epsilon compared against the evolution of the homogenized medium built
//! from the cell solvers.
//!
//! The grid policy pairs each epsilon with a cells-per-period count; the
//! policy must resolve the microstructure (at least 8 cells per period) and
//! is expected to refine as epsilon shrinks, since a fixed per-period
//! resolution would freeze the discretization error of the effective
//! coefficient.

use crate::cell::{f_hom_cell, g_hom_cell, CutDirection, UnitCell};
use crate::error::{Error, Result};
use crate::evolution::{run_evolution, BackendSpec, EvolutionTrace};
use crate::field::{uniform_times, BoundaryDatum};
use crate::grid::{build_grid, Axis, DirichletSpec, Grid};
use crate::medium::{sample_periodic, Medium, PeriodicMedium};
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub cell: UnitCell,
    /// Strictly decreasing scale parameters.
    pub epsilons: Vec<f64>,
    /// Grid policy: cells per microstructure period, one entry per epsilon.
    pub cells_per_period: Vec<usize>,
    pub t_end: f64,
    pub delta: f64,
    /// Ramp magnitude at the pulled end.
    pub datum_magnitude: f64,
    /// Cell-solver resolution for the homogenized coefficients.
    pub hom_resolution: usize,
    /// Grid cells of the homogenized evolution run.
    pub hom_grid_cells: usize,
    /// Convergence verdict: last deviation must stay below this fraction of
    /// the energy scale (default 0.05) and be at most half the first.
    pub tol_last: f64,
    /// Lower-semicontinuity margin tolerance (default 0.02).
    pub tol_margin: f64,
}

/// Energy curves sampled on the comparison time grid.
#[derive(Clone, Debug)]
pub struct EnergyCurves {
    pub bulk: Vec<f64>,
    pub surface: Vec<f64>,
    pub total: Vec<f64>,
}

/// Max-over-time deviations from the homogenized curves, relative to the
/// homogenized energy scale.
#[derive(Clone, Copy, Debug)]
pub struct Deviations {
    pub bulk: f64,
    pub surface: f64,
    pub total: f64,
}

#[derive(Clone, Debug)]
pub struct SweepVerdicts {
    /// Last-epsilon deviation within tolerance and at least halved from the
    /// first epsilon, per channel (total, bulk, surface).
    pub converged_total: bool,
    pub converged_bulk: bool,
    pub converged_surface: bool,
    /// Total deviation non-increasing along the epsilon list, allowing one
    /// grid-noise violation of at most 0.5% of the scale.
    pub monotone_total: bool,
    pub lsc_total: bool,
    pub lsc_surface: bool,
    pub caveat: Option<String>,
}

impl SweepVerdicts {
    pub fn all_pass(&self) -> bool {
        self.converged_total
            && self.converged_bulk
            && self.converged_surface
            && self.monotone_total
            && self.lsc_total
            && self.lsc_surface
    }
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub epsilons: Vec<f64>,
    /// Comparison time grid (the coarsest trace grid).
    pub times: Vec<f64>,
    pub per_epsilon: Vec<EnergyCurves>,
    pub hom: EnergyCurves,
    pub deviations: Vec<Deviations>,
    /// Homogenized effective coefficient and toughness used for the
    /// reference run.
    pub f_hom_coefficient: f64,
    pub g_hom_min: f64,
    /// max_t of the homogenized total energy; deviations are relative to it.
    pub energy_scale: f64,
    pub tol_last: f64,
    pub tol_margin: f64,
    pub verdicts: SweepVerdicts,
}

/// Right-continuous sampling of a trace onto the comparison grid.
fn sample_curves(trace: &EvolutionTrace, times: &[f64]) -> EnergyCurves {
    let mut bulk = Vec::with_capacity(times.len());
    let mut surface = Vec::with_capacity(times.len());
    let mut total = Vec::with_capacity(times.len());
    let mut idx = 0usize;
    for &t in times {
        while idx + 1 < trace.steps.len() && trace.steps[idx + 1].time <= t + 1e-12 {
            idx += 1;
        }
        let s = &trace.steps[idx];
        bulk.push(s.energy.bulk);
        surface.push(s.energy.surface);
        total.push(s.energy.total());
    }
    EnergyCurves {
        bulk,
        surface,
        total,
    }
}

fn max_dev(a: &[f64], b: &[f64], scale: f64) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        / scale
}

/// Runs the sweep: one evolution per epsilon plus the homogenized reference,
/// sampled on a common time grid with per-time deviations and verdicts.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.cell.validate()?;
    if cfg.epsilons.is_empty() || cfg.epsilons.len() != cfg.cells_per_period.len() {
        return Err(Error::config(
            "sweep needs one cells-per-period entry per epsilon",
        ));
    }
    for w in cfg.epsilons.windows(2) {
        if !(w[0] > w[1]) {
            return Err(Error::config("epsilon list must be strictly decreasing"));
        }
    }
    for (&eps, &cpp) in cfg.epsilons.iter().zip(&cfg.cells_per_period) {
        if cpp < 8 {
            return Err(Error::config(format!(
                "under-resolved epsilon {eps}: grid policy gives h = eps/{cpp} > eps/8"
            )));
        }
    }
    if cfg.cell.dim != 1 && cfg.cell.dim != 2 {
        return Err(Error::config("sweep supports 1D and 2D cells"));
    }

    // homogenized coefficients from the cell solvers
    let (f_dir, g_dir) = if cfg.cell.dim == 1 {
        ([1.0, 0.0], CutDirection::axis(Axis::X))
    } else {
        // pull-apart in y: gradient direction e2, crack travels along x
        ([0.0, 1.0], CutDirection::axis(Axis::X))
    };
    let f_hom_coefficient = f_hom_cell(&cfg.cell, f_dir, cfg.hom_resolution)?;
    let g_hom_min = g_hom_cell(&cfg.cell, g_dir, cfg.hom_resolution.min(512), 3)?;

    let times_full = uniform_times(cfg.t_end, cfg.delta)?;

    let run_one = |eps: f64, cpp: usize| -> Result<EvolutionTrace> {
        let cells = (cpp as f64 / eps).round() as usize;
        let h = 1.0 / cells as f64;
        if h > eps / 8.0 + 1e-12 {
            return Err(Error::config(format!(
                "grid policy violated at epsilon {eps}: h = {h} > eps/8"
            )));
        }
        let pm = PeriodicMedium::new(
            cfg.cell.bulk.clone(),
            cfg.cell.toughness.clone(),
            cfg.cell.toughness_anisotropy,
            eps,
            cfg.cell.p,
        )?;
        if cfg.cell.dim == 1 {
            let grid = build_grid(1, &[1.0], &[cells + 1], DirichletSpec::Ends)?;
            let medium = sample_periodic(&pm, &grid)?;
            let datum = BoundaryDatum::ramp(times_full.clone(), vec![0.0, cfg.datum_magnitude])?;
            run_evolution(
                &grid,
                &medium,
                &datum,
                BackendSpec::Generic1d {
                    pair_threshold: 256,
                },
            )
        } else {
            let grid = build_grid(
                2,
                &[1.0, 1.0],
                &[cells + 1, cells + 1],
                DirichletSpec::BottomTop,
            )?;
            let medium = sample_periodic(&pm, &grid)?;
            let datum = pull_apart_datum(&grid, &times_full, cfg.datum_magnitude)?;
            run_evolution(&grid, &medium, &datum, BackendSpec::Path2d)
        }
    };

    let traces: Vec<EvolutionTrace> = cfg
        .epsilons
        .par_iter()
        .zip(&cfg.cells_per_period)
        .map(|(&eps, &cpp)| run_one(eps, cpp))
        .collect::<Result<_>>()?;

    // homogenized run on a regular grid with the constant effective medium
    let hom_trace = {
        if cfg.cell.dim == 1 {
            let grid = build_grid(1, &[1.0], &[cfg.hom_grid_cells + 1], DirichletSpec::Ends)?;
            let medium = Medium::constant(&grid, f_hom_coefficient, g_hom_min, cfg.cell.p)?;
            let datum = BoundaryDatum::ramp(times_full.clone(), vec![0.0, cfg.datum_magnitude])?;
            run_evolution(
                &grid,
                &medium,
                &datum,
                BackendSpec::Generic1d {
                    pair_threshold: 256,
                },
            )?
        } else {
            let n = cfg.hom_grid_cells + 1;
            let grid = build_grid(2, &[1.0, 1.0], &[n, n], DirichletSpec::BottomTop)?;
            let medium = Medium::constant(&grid, f_hom_coefficient, g_hom_min, cfg.cell.p)?;
            let datum = pull_apart_datum(&grid, &times_full, cfg.datum_magnitude)?;
            run_evolution(&grid, &medium, &datum, BackendSpec::Path2d)?
        }
    };

    // comparison grid: the coarsest trace grid (all share delta here, so it
    // is the time grid itself)
    let times = times_full.clone();
    let hom = sample_curves(&hom_trace, &times);
    let per_epsilon: Vec<EnergyCurves> = traces.iter().map(|t| sample_curves(t, &times)).collect();

    let energy_scale = hom.total.iter().fold(0.0f64, |m, v| m.max(*v)).max(1e-12);
    let deviations: Vec<Deviations> = per_epsilon
        .iter()
        .map(|c| Deviations {
            bulk: max_dev(&c.bulk, &hom.bulk, energy_scale),
            surface: max_dev(&c.surface, &hom.surface, energy_scale),
            total: max_dev(&c.total, &hom.total, energy_scale),
        })
        .collect();

    let caveat = if cfg.cell.dim == 2 {
        Some(
            "2D sweep: the crack family is restricted to monotone dual paths; \
             energies under-approximate the unrestricted minimization"
                .to_string(),
        )
    } else {
        None
    };

    let mut report = SweepReport {
        epsilons: cfg.epsilons.clone(),
        times,
        per_epsilon,
        hom,
        deviations,
        f_hom_coefficient,
        g_hom_min,
        energy_scale,
        tol_last: cfg.tol_last,
        tol_margin: cfg.tol_margin,
        verdicts: SweepVerdicts {
            converged_total: false,
            converged_bulk: false,
            converged_surface: false,
            monotone_total: false,
            lsc_total: false,
            lsc_surface: false,
            caveat,
        },
    };
    let v = compute_verdicts(&report);
    report.verdicts.converged_total = v.converged_total;
    report.verdicts.converged_bulk = v.converged_bulk;
    report.verdicts.converged_surface = v.converged_surface;
    report.verdicts.monotone_total = v.monotone_total;
    report.verdicts.lsc_total = v.lsc_total;
    report.verdicts.lsc_surface = v.lsc_surface;
    Ok(report)
}

fn pull_apart_datum(grid: &Grid, times: &[f64], magnitude: f64) -> Result<BoundaryDatum> {
    let top = grid.counts()[1] - 1;
    let profile: Vec<f64> = grid
        .dirichlet_nodes()
        .iter()
        .map(|&n| {
            if grid.node_coords(n).1 == top {
                magnitude
            } else {
                0.0
            }
        })
        .collect();
    BoundaryDatum::ramp(times.to_vec(), profile)
}

/// Convergence verdict per channel: the last deviation is below `tol_last`
/// of the energy scale and at most half of the first.
fn converged(devs: &[f64], tol_last: f64) -> bool {
    match (devs.first(), devs.last()) {
        (Some(&first), Some(&last)) => last <= tol_last && last <= 0.5 * first + 1e-12,
        _ => false,
    }
}

/// Verdicts derived only from the stored curves and deviations.
pub fn compute_verdicts(report: &SweepReport) -> SweepVerdicts {
    let totals: Vec<f64> = report.deviations.iter().map(|d| d.total).collect();
    let bulks: Vec<f64> = report.deviations.iter().map(|d| d.bulk).collect();
    let surfaces: Vec<f64> = report.deviations.iter().map(|d| d.surface).collect();

    let mut violations = 0usize;
    let mut monotone_total = true;
    for w in totals.windows(2) {
        if w[1] > w[0] + 1e-12 {
            violations += 1;
            if w[1] - w[0] > 0.005 || violations > 1 {
                monotone_total = false;
            }
        }
    }

    let lsc = lsc_checks(report);
    SweepVerdicts {
        converged_total: converged(&totals, report.tol_last),
        converged_bulk: converged(&bulks, report.tol_last),
        converged_surface: converged(&surfaces, report.tol_last),
        monotone_total,
        lsc_total: lsc.total_pass,
        lsc_surface: lsc.surface_pass,
        caveat: report.verdicts.caveat.clone(),
    }
}

/// Per-time lower-semicontinuity margins of the homogenized curves against
/// the finest-epsilon run: hom must not exceed the epsilon-tail energies
/// beyond the margin tolerance.
#[derive(Clone, Debug)]
pub struct LscReport {
    /// (epsilon-tail - hom) / scale per comparison time, total energy.
    pub total_margins: Vec<f64>,
    pub surface_margins: Vec<f64>,
    pub min_total_margin: f64,
    pub min_surface_margin: f64,
    pub total_pass: bool,
    pub surface_pass: bool,
}

pub fn lsc_checks(report: &SweepReport) -> LscReport {
    let scale = report.energy_scale;
    let tail = report
        .per_epsilon
        .last()
        .expect("sweep has at least one epsilon");
    let total_margins: Vec<f64> = tail
        .total
        .iter()
        .zip(&report.hom.total)
        .map(|(e, h)| (e - h) / scale)
        .collect();
    let surface_margins: Vec<f64> = tail
        .surface
        .iter()
        .zip(&report.hom.surface)
        .map(|(e, h)| (e - h) / scale)
        .collect();
    let min_total_margin = total_margins.iter().cloned().fold(f64::INFINITY, f64::min);
    let min_surface_margin = surface_margins
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    LscReport {
        total_pass: min_total_margin >= -report.tol_margin,
        surface_pass: min_surface_margin >= -report.tol_margin,
        total_margins,
        surface_margins,
        min_total_margin,
        min_surface_margin,
    }
}

/// The 1D reference configuration: bulk phases {1, 4} at volume fraction
/// 0.4, toughness {2, 1} at fraction 0.5, ramp to t = 1.2. The grid policy
/// doubles the per-period resolution as epsilon halves so the discrete
/// effective coefficient converges to the table value.
pub fn benchmark_config_1d() -> SweepConfig {
    use crate::medium::CellPattern;
    SweepConfig {
        cell: UnitCell {
            dim: 1,
            bulk: CellPattern::Layered {
                axis: Axis::X,
                boundaries: vec![0.0, 0.4],
                values: vec![1.0, 4.0],
            },
            toughness: CellPattern::Layered {
                axis: Axis::X,
                boundaries: vec![0.0, 0.5],
                values: vec![2.0, 1.0],
            },
            toughness_anisotropy: [1.0, 1.0],
            p: 2.0,
        },
        epsilons: vec![0.25, 0.125, 0.0625, 0.03125, 0.015625],
        cells_per_period: vec![8, 16, 32, 64, 128],
        t_end: 1.2,
        delta: 0.0125,
        datum_magnitude: 1.0,
        hom_resolution: 1280,
        hom_grid_cells: 1024,
        tol_last: 0.05,
        tol_margin: 0.02,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::CellPattern;

    #[test]
    fn constant_cell_zero_deviations() {
        let cfg = SweepConfig {
            cell: UnitCell {
                dim: 1,
                bulk: CellPattern::Constant(2.0),
                toughness: CellPattern::Constant(1.0),
                toughness_anisotropy: [1.0, 1.0],
                p: 2.0,
            },
            epsilons: vec![0.25, 0.125],
            cells_per_period: vec![8, 16],
            t_end: 1.0,
            delta: 0.05,
            datum_magnitude: 1.0,
            hom_resolution: 64,
            hom_grid_cells: 32,
            tol_last: 0.05,
            tol_margin: 0.02,
        };
        let report = run_sweep(&cfg).unwrap();
        assert!((report.f_hom_coefficient - 2.0).abs() < 1e-12);
        assert!((report.g_hom_min - 1.0).abs() < 1e-15);
        for d in &report.deviations {
            assert!(d.total < 1e-10, "total dev {}", d.total);
            assert!(d.bulk < 1e-10);
            assert!(d.surface < 1e-10);
        }
        assert!(report.verdicts.all_pass());
        let lsc = lsc_checks(&report);
        // margins exactly zero before and after the crack
        assert!(lsc.min_total_margin.abs() < 1e-10);
    }

    #[test]
    fn benchmark_deviations_converge() {
        let mut cfg = benchmark_config_1d();
        // trim for test speed; the acceptance suite runs the full list
        cfg.epsilons.truncate(3);
        cfg.cells_per_period.truncate(3);
        cfg.hom_resolution = 640;
        cfg.hom_grid_cells = 256;
        let report = run_sweep(&cfg).unwrap();
        // discrete effective coefficient at cpp = 8 overshoots: H = 0.53125
        let d0 = report.deviations[0].total;
        let d2 = report.deviations[2].total;
        assert!(d0 > 0.01, "first deviation {d0} should be visible");
        assert!(
            d2 < 0.5 * d0,
            "deviations should at least halve: {d0} -> {d2}"
        );
        let lsc = lsc_checks(&report);
        assert!(lsc.total_pass && lsc.surface_pass);
    }

    #[test]
    fn corrupted_hom_table_is_flagged() {
        let cfg = SweepConfig {
            cell: UnitCell {
                dim: 1,
                bulk: CellPattern::Constant(1.0),
                toughness: CellPattern::Constant(1.0),
                toughness_anisotropy: [1.0, 1.0],
                p: 2.0,
            },
            epsilons: vec![0.25],
            cells_per_period: vec![8],
            t_end: 1.4,
            delta: 0.05,
            datum_magnitude: 1.0,
            hom_resolution: 64,
            hom_grid_cells: 32,
            tol_last: 0.05,
            tol_margin: 0.02,
        };
        let mut report = run_sweep(&cfg).unwrap();
        assert!(lsc_checks(&report).total_pass);
        // inject a corrupted surface density: hom curves rise by 1.5x after
        // the crack, breaking lower semicontinuity against the tail
        for (s, t) in report
            .hom
            .surface
            .iter_mut()
            .zip(report.hom.total.iter_mut())
        {
            if *s > 0.0 {
                *t += 0.5 * *s;
                *s *= 1.5;
            }
        }
        let lsc = lsc_checks(&report);
        assert!(!lsc.total_pass || !lsc.surface_pass);
        let v = compute_verdicts(&report);
        assert!(!v.lsc_surface);
    }

    #[test]
    fn two_d_sweep_carries_caveat() {
        // constant 2D cell: the epsilon run and the homogenized run coincide
        let cfg = SweepConfig {
            cell: UnitCell {
                dim: 2,
                bulk: CellPattern::Constant(1.0),
                toughness: CellPattern::Constant(1.0),
                toughness_anisotropy: [1.0, 1.0],
                p: 2.0,
            },
            epsilons: vec![0.5],
            cells_per_period: vec![8],
            t_end: 1.3,
            delta: 0.1,
            datum_magnitude: 1.0,
            hom_resolution: 32,
            hom_grid_cells: 16,
            tol_last: 0.05,
            tol_margin: 0.02,
        };
        let report = run_sweep(&cfg).unwrap();
        assert!(report.verdicts.caveat.is_some());
        assert!(report.deviations[0].total < 1e-10);
        // both cut the full width at the same step
        let last = report.per_epsilon[0].surface.last().unwrap();
        assert!((last - 1.0).abs() < 1e-10, "{last}");
    }

    #[test]
    fn policy_validation() {
        let mut cfg = benchmark_config_1d();
        cfg.cells_per_period[0] = 4; // h > eps/8
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = benchmark_config_1d();
        cfg.epsilons = vec![0.25, 0.25];
        cfg.cells_per_period = vec![8, 8];
        assert!(run_sweep(&cfg).is_err());
    }
}
