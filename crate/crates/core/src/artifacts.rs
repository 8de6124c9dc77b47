//! Output artifacts: CSV and text reports, written atomically (temp file
//! plus rename) with a fixed 17-significant-digit float format so reruns are
//! byte-identical across platforms and thread counts.

use crate::cell::EffectiveDensityTable;
use crate::error::Result;
use crate::evolution::EvolutionTrace;
use crate::field::ScalarField;
use crate::grid::{Axis, Grid};
use crate::mincut::SigmaProbeReport;
use crate::sweep::{lsc_checks, SweepReport};
use std::fmt::Write as _;
use std::path::Path;

/// 17 significant digits, scientific; round-trips any f64 exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Atomic write: the target never exists half-written.
pub fn atomic_write(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Trace CSV: step, t, bulk, surface, total, theta, cumulative_work,
/// n_cracked_edges (cracked edges plus released boundary faces).
pub fn write_trace_csv(path: &Path, trace: &EvolutionTrace) -> Result<()> {
    let mut s = String::new();
    s.push_str("step,t,bulk,surface,total,theta,cumulative_work,n_cracked_edges\n");
    for (i, step) in trace.steps.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            i,
            fmt_float(step.time),
            fmt_float(step.energy.bulk),
            fmt_float(step.energy.surface),
            fmt_float(step.energy.total()),
            fmt_float(step.theta),
            fmt_float(step.cumulative_work),
            step.n_cracked + step.n_released,
        );
    }
    atomic_write(path, &s)
}

/// Crack log CSV: step, edge id. Boundary releases are logged with ids past
/// the edge range: edge_count + dirichlet rank.
pub fn write_crack_log_csv(path: &Path, grid: &Grid, trace: &EvolutionTrace) -> Result<()> {
    let mut s = String::new();
    s.push_str("step,edge\n");
    for (i, step) in trace.steps.iter().enumerate() {
        for &e in &step.new_edges {
            let _ = writeln!(s, "{i},{e}");
        }
        for &r in &step.new_releases {
            let _ = writeln!(s, "{i},{}", grid.edge_count() + r);
        }
    }
    atomic_write(path, &s)
}

/// Solution CSV: node index, value.
pub fn write_solution_csv(path: &Path, field: &ScalarField) -> Result<()> {
    let mut s = String::new();
    s.push_str("node,value\n");
    for (n, v) in field.values.iter().enumerate() {
        let _ = writeln!(s, "{n},{}", fmt_float(*v));
    }
    atomic_write(path, &s)
}

/// Effective density table CSV:
/// kind, component1, component2, value, resolution, diagnostic.
pub fn write_table_csv(path: &Path, table: &EffectiveDensityTable) -> Result<()> {
    let mut s = String::new();
    s.push_str("kind,component1,component2,value,resolution,diagnostic\n");
    for e in &table.bulk {
        let _ = writeln!(
            s,
            "bulk,{},{},{},{},{}",
            fmt_float(e.xi[0]),
            fmt_float(e.xi[1]),
            fmt_float(e.value),
            e.resolution,
            fmt_float(e.refinement_delta),
        );
    }
    for e in &table.surface {
        let _ = writeln!(
            s,
            "surface,{},{},{},{},{}",
            fmt_float(e.normal[0]),
            fmt_float(e.normal[1]),
            fmt_float(e.value),
            e.resolution,
            fmt_float(e.refinement_delta),
        );
    }
    atomic_write(path, &s)
}

/// Sigma probe CSV: generator, n, x, y, rho, nu, density.
pub fn write_sigma_csv(path: &Path, reports: &[SigmaProbeReport]) -> Result<()> {
    let mut s = String::new();
    s.push_str("generator,n,x,y,rho,nu,density\n");
    for r in reports {
        let nu = match r.normal {
            Axis::X => "e1",
            Axis::Y => "e2",
        };
        for &(n, density) in &r.estimates {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.generator,
                n,
                fmt_float(r.center[0]),
                fmt_float(r.center[1]),
                fmt_float(r.radius),
                nu,
                fmt_float(density),
            );
        }
    }
    atomic_write(path, &s)
}

/// Sweep CSV: epsilon, t, bulk, surface, total, bulk_hom, surface_hom,
/// total_hom, dev_total.
pub fn write_sweep_csv(path: &Path, report: &SweepReport) -> Result<()> {
    let mut s = String::new();
    s.push_str("epsilon,t,bulk,surface,total,bulk_hom,surface_hom,total_hom,dev_total\n");
    for (k, &eps) in report.epsilons.iter().enumerate() {
        let c = &report.per_epsilon[k];
        for (i, &t) in report.times.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                fmt_float(eps),
                fmt_float(t),
                fmt_float(c.bulk[i]),
                fmt_float(c.surface[i]),
                fmt_float(c.total[i]),
                fmt_float(report.hom.bulk[i]),
                fmt_float(report.hom.surface[i]),
                fmt_float(report.hom.total[i]),
                fmt_float((c.total[i] - report.hom.total[i]).abs()),
            );
        }
    }
    atomic_write(path, &s)
}

/// Verdict summary with a fixed field order.
pub fn write_sweep_verdicts(path: &Path, report: &SweepReport) -> Result<()> {
    let v = &report.verdicts;
    let lsc = lsc_checks(report);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "f_hom_coefficient = {}",
        fmt_float(report.f_hom_coefficient)
    );
    let _ = writeln!(s, "g_hom_min = {}", fmt_float(report.g_hom_min));
    let _ = writeln!(s, "energy_scale = {}", fmt_float(report.energy_scale));
    for (k, &eps) in report.epsilons.iter().enumerate() {
        let d = &report.deviations[k];
        let _ = writeln!(
            s,
            "epsilon = {} dev_total = {} dev_bulk = {} dev_surface = {}",
            fmt_float(eps),
            fmt_float(d.total),
            fmt_float(d.bulk),
            fmt_float(d.surface),
        );
    }
    let _ = writeln!(s, "converged_total = {}", v.converged_total);
    let _ = writeln!(s, "converged_bulk = {}", v.converged_bulk);
    let _ = writeln!(s, "converged_surface = {}", v.converged_surface);
    let _ = writeln!(s, "monotone_total = {}", v.monotone_total);
    let _ = writeln!(
        s,
        "lsc_total = {} (min margin {})",
        v.lsc_total,
        fmt_float(lsc.min_total_margin)
    );
    let _ = writeln!(
        s,
        "lsc_surface = {} (min margin {})",
        v.lsc_surface,
        fmt_float(lsc.min_surface_margin)
    );
    if let Some(c) = &v.caveat {
        let _ = writeln!(s, "caveat = {c}");
    }
    atomic_write(path, &s)
}
