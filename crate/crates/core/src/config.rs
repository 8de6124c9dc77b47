//! Run configuration: a TOML file with nested sections describing the grid,
//! the medium, the boundary datum, the time grid, and the per-command
//! sections. Explicit coefficient tables load from CSV files with a header
//! row (index column, value column); paths are relative to the config file.

use crate::cell::{TablePlan, UnitCell};
use crate::error::{Error, Result};
use crate::evolution::BackendSpec;
use crate::field::{uniform_times, BoundaryDatum};
use crate::grid::{build_grid, Axis, DirichletSpec, Grid};
use crate::medium::{sample_periodic, CellPattern, Medium, PeriodicMedium};
use crate::mincut::{SequenceDescriptor, SigmaProbeConfig};
use crate::sweep::SweepConfig;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: Option<GridCfg>,
    pub medium: Option<MediumCfg>,
    pub datum: Option<DatumCfg>,
    pub time: Option<TimeCfg>,
    pub evolution: Option<EvolutionCfg>,
    pub sigma: Option<SigmaCfg>,
    pub cell: Option<CellCfg>,
    pub sweep: Option<SweepCfg>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCfg {
    pub dimension: usize,
    pub extent: Vec<f64>,
    pub nodes: Vec<usize>,
    /// "ends" | "bottom-top" | "left-right" | "none"
    #[serde(default)]
    pub dirichlet: Option<String>,
    #[serde(default)]
    pub dirichlet_nodes: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PatternCfg {
    Constant {
        value: f64,
    },
    Layered {
        axis: String,
        boundaries: Vec<f64>,
        values: Vec<f64>,
    },
    Checkerboard {
        values: [f64; 2],
    },
    /// Unit-cell table, inline values or a CSV with header cell,value.
    Table {
        resolution: [usize; 2],
        #[serde(default)]
        values: Vec<f64>,
        #[serde(default)]
        csv: Option<String>,
    },
    /// Direct per-grid-cell table from CSV (header cell,value).
    CellsCsv {
        csv: String,
    },
    /// Direct per-grid-edge table from CSV (header edge,value).
    EdgesCsv {
        csv: String,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumCfg {
    #[serde(default = "default_p")]
    pub p: f64,
    pub bulk: PatternCfg,
    pub toughness: PatternCfg,
    #[serde(default = "default_aniso")]
    pub anisotropy: [f64; 2],
    /// Present: the patterns are a unit cell sampled at x/epsilon.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
}

fn default_p() -> f64 {
    2.0
}

fn default_aniso() -> [f64; 2] {
    [1.0, 1.0]
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumCfg {
    /// "ramp" | "table"
    pub kind: String,
    /// ramp: "stretch-x" | "pull-y" | "csv"
    #[serde(default)]
    pub profile: Option<String>,
    #[serde(default = "default_magnitude")]
    pub magnitude: f64,
    #[serde(default)]
    pub csv: Option<String>,
    #[serde(default)]
    pub bound: Option<f64>,
}

fn default_magnitude() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeCfg {
    #[serde(default)]
    pub t_end: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub times: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionCfg {
    /// "exhaustive-1d" | "generic-1d" | "path-2d" | "exhaustive-2d"
    pub backend: String,
    #[serde(default)]
    pub candidate_edges: Option<Vec<usize>>,
    #[serde(default)]
    pub write_solutions: bool,
    /// verify command: challenge budget for sampled families.
    #[serde(default = "default_budget")]
    pub verify_budget: usize,
    /// verify command: number of sampled steps.
    #[serde(default = "default_verify_steps")]
    pub verify_steps: usize,
    /// verify command: challenge edge family (default: every grid edge, so
    /// a restricted backend is audited against the unrestricted family).
    #[serde(default)]
    pub verify_edges: Option<Vec<usize>>,
}

fn default_budget() -> usize {
    4096
}

fn default_verify_steps() -> usize {
    4
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaCfg {
    /// "teeth" | "fraction" | "fixed-line" | "custom"
    pub generator: String,
    #[serde(default)]
    pub fraction: Option<f64>,
    #[serde(default)]
    pub custom_csv: Option<String>,
    pub resolution: usize,
    pub centers: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
    pub n_list: Vec<usize>,
    /// "x" | "y"
    pub normal: String,
    #[serde(default)]
    pub tau: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellCfg {
    pub resolution: usize,
    #[serde(default = "default_directions")]
    pub directions: usize,
    #[serde(default = "default_magnitudes")]
    pub magnitudes: Vec<f64>,
    #[serde(default = "default_strip_v")]
    pub strip_v: usize,
    #[serde(default = "default_max_run")]
    pub max_run: u32,
    #[serde(default)]
    pub scaling_c1: Option<f64>,
    #[serde(default)]
    pub scaling_c2: Option<f64>,
}

fn default_directions() -> usize {
    16
}

fn default_magnitudes() -> Vec<f64> {
    vec![0.5, 1.0, 1.5, 2.0]
}

fn default_strip_v() -> usize {
    3
}

fn default_max_run() -> u32 {
    4
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCfg {
    pub epsilons: Vec<f64>,
    pub cells_per_period: Vec<usize>,
    #[serde(default = "default_hom_resolution")]
    pub hom_resolution: usize,
    #[serde(default = "default_hom_cells")]
    pub hom_grid_cells: usize,
    #[serde(default = "default_tol_last")]
    pub tol_last: f64,
    #[serde(default = "default_tol_margin")]
    pub tol_margin: f64,
}

fn default_hom_resolution() -> usize {
    1280
}

fn default_hom_cells() -> usize {
    1024
}

fn default_tol_last() -> f64 {
    0.05
}

fn default_tol_margin() -> f64 {
    0.02
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| Error::config(format!("cannot parse config {}: {e}", path.display())))?;
        cfg.base_dir = path
            .parent()
            .map(|p| p.to_path_buf())
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(cfg)
    }

    fn resolve(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn build_grid(&self) -> Result<Grid> {
        let g = self
            .grid
            .as_ref()
            .ok_or_else(|| Error::config("missing [grid] section"))?;
        let spec = if let Some(nodes) = &g.dirichlet_nodes {
            DirichletSpec::Nodes(nodes.clone())
        } else {
            match g.dirichlet.as_deref() {
                Some("ends") => DirichletSpec::Ends,
                Some("bottom-top") => DirichletSpec::BottomTop,
                Some("left-right") => DirichletSpec::LeftRight,
                Some("none") | None => DirichletSpec::Empty,
                Some(other) => {
                    return Err(Error::config(format!("unknown dirichlet spec '{other}'")))
                }
            }
        };
        build_grid(g.dimension, &g.extent, &g.nodes, spec)
    }

    fn pattern(&self, cfg: &PatternCfg) -> Result<CellPattern> {
        let p = match cfg {
            PatternCfg::Constant { value } => CellPattern::Constant(*value),
            PatternCfg::Layered {
                axis,
                boundaries,
                values,
            } => CellPattern::Layered {
                axis: parse_axis(axis)?,
                boundaries: boundaries.clone(),
                values: values.clone(),
            },
            PatternCfg::Checkerboard { values } => CellPattern::Checkerboard { values: *values },
            PatternCfg::Table {
                resolution,
                values,
                csv,
            } => {
                let values = if let Some(csv) = csv {
                    let rows = read_indexed_csv(&self.resolve(csv))?;
                    densify(rows, resolution[0] * resolution[1].max(1))?
                } else {
                    values.clone()
                };
                CellPattern::Table {
                    resolution: *resolution,
                    values,
                }
            }
            PatternCfg::CellsCsv { .. } | PatternCfg::EdgesCsv { .. } => {
                return Err(Error::config(
                    "grid-indexed tables cannot be used as a unit-cell pattern",
                ))
            }
        };
        p.validate()?;
        Ok(p)
    }

    /// Materializes the medium on the grid. Periodic media are sampled at
    /// x/epsilon; direct tables are read from CSV.
    pub fn build_medium(&self, grid: &Grid) -> Result<Medium> {
        let m = self
            .medium
            .as_ref()
            .ok_or_else(|| Error::config("missing [medium] section"))?;
        if let Some(eps) = m.epsilon {
            let pm = PeriodicMedium::new(
                self.pattern(&m.bulk)?,
                self.pattern(&m.toughness)?,
                m.anisotropy,
                eps,
                m.p,
            )?;
            return sample_periodic(&pm, grid);
        }
        let a: Vec<f64> = match &m.bulk {
            PatternCfg::CellsCsv { csv } => {
                densify(read_indexed_csv(&self.resolve(csv))?, grid.cell_count())?
            }
            PatternCfg::EdgesCsv { .. } => {
                return Err(Error::config("bulk coefficient is per cell, not per edge"))
            }
            other => {
                let pat = self.pattern(other)?;
                let ext = grid.extents();
                (0..grid.cell_count())
                    .map(|c| {
                        let p = grid.cell_center(c);
                        pat.eval(
                            p[0] / ext[0],
                            if grid.dim() == 2 { p[1] / ext[1] } else { 0.0 },
                        )
                    })
                    .collect()
            }
        };
        let kappa: Vec<f64> = match &m.toughness {
            PatternCfg::EdgesCsv { csv } => {
                densify(read_indexed_csv(&self.resolve(csv))?, grid.edge_count())?
            }
            PatternCfg::CellsCsv { csv } => {
                // per-cell toughness: edges take the mean of adjacent cells
                let cells = densify(read_indexed_csv(&self.resolve(csv))?, grid.cell_count())?;
                grid.edges()
                    .map(|e| match grid.edge_cells(e) {
                        (Some(c0), Some(c1)) => 0.5 * (cells[c0] + cells[c1]),
                        (Some(c), None) | (None, Some(c)) => cells[c],
                        (None, None) => unreachable!(),
                    })
                    .collect()
            }
            other => {
                let pat = self.pattern(other)?;
                let ext = grid.extents();
                grid.edges()
                    .map(|e| {
                        let p = grid.edge_midpoint(e);
                        let aniso = match grid.edge_axis(e) {
                            Axis::X => m.anisotropy[0],
                            Axis::Y => m.anisotropy[1],
                        };
                        aniso
                            * pat.eval(
                                p[0] / ext[0],
                                if grid.dim() == 2 { p[1] / ext[1] } else { 0.0 },
                            )
                    })
                    .collect()
            }
        };
        // boundary ghost faces take the toughness nearest the node
        let kappa_boundary: Vec<f64> = grid
            .dirichlet_nodes()
            .iter()
            .map(|&node| nearest_edge_kappa(grid, &kappa, node))
            .collect();
        let mut lo = f64::MAX;
        let mut hi: f64 = 0.0;
        for v in a.iter().chain(&kappa).chain(&kappa_boundary) {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        let alpha = m.alpha.unwrap_or(lo);
        let beta = m.beta.unwrap_or(hi);
        Medium::new(grid, a, kappa, kappa_boundary, m.p, alpha, beta)
    }

    pub fn build_times(&self) -> Result<Vec<f64>> {
        let t = self
            .time
            .as_ref()
            .ok_or_else(|| Error::config("missing [time] section"))?;
        if let Some(times) = &t.times {
            return Ok(times.clone());
        }
        match (t.t_end, t.delta) {
            (Some(te), Some(d)) => uniform_times(te, d),
            _ => Err(Error::config(
                "[time] needs either times or t_end and delta",
            )),
        }
    }

    pub fn build_datum(&self, grid: &Grid) -> Result<BoundaryDatum> {
        let d = self
            .datum
            .as_ref()
            .ok_or_else(|| Error::config("missing [datum] section"))?;
        let times = self.build_times()?;
        match d.kind.as_str() {
            "ramp" => {
                let profile = match d.profile.as_deref() {
                    Some("stretch-x") | None => stretch_profile(grid, d.magnitude, Axis::X),
                    Some("pull-y") => stretch_profile(grid, d.magnitude, Axis::Y),
                    Some("csv") => {
                        let csv = d
                            .csv
                            .as_ref()
                            .ok_or_else(|| Error::config("datum profile 'csv' needs a csv path"))?;
                        profile_from_csv(grid, &self.resolve(csv))?
                    }
                    Some(other) => {
                        return Err(Error::config(format!("unknown ramp profile '{other}'")))
                    }
                };
                let mut datum = BoundaryDatum::ramp(times, profile)?;
                if let Some(b) = d.bound {
                    datum.bound = b;
                }
                datum.validate()?;
                Ok(datum)
            }
            "table" => {
                let csv = d
                    .csv
                    .as_ref()
                    .ok_or_else(|| Error::config("datum kind 'table' needs a csv path"))?;
                let rows = datum_rows_from_csv(&self.resolve(csv), grid.dirichlet_nodes().len())?;
                if rows.len() != times.len() {
                    return Err(Error::config(format!(
                        "datum table has {} rows but the time grid has {} steps",
                        rows.len(),
                        times.len()
                    )));
                }
                let bound = d.bound.unwrap_or_else(|| {
                    rows.iter()
                        .flat_map(|r| r.iter())
                        .fold(0.0f64, |m, v| m.max(v.abs()))
                });
                BoundaryDatum::explicit(times, rows, bound)
            }
            other => Err(Error::config(format!("unknown datum kind '{other}'"))),
        }
    }

    pub fn build_backend(&self) -> Result<BackendSpec> {
        let e = self
            .evolution
            .as_ref()
            .ok_or_else(|| Error::config("missing [evolution] section"))?;
        match e.backend.as_str() {
            "exhaustive-1d" => Ok(BackendSpec::Exhaustive1d { max_new: 2 }),
            "generic-1d" => Ok(BackendSpec::Generic1d {
                pair_threshold: 256,
            }),
            "path-2d" => Ok(BackendSpec::Path2d),
            "exhaustive-2d" => {
                let edges = e
                    .candidate_edges
                    .clone()
                    .ok_or_else(|| Error::config("exhaustive-2d backend needs candidate_edges"))?;
                Ok(BackendSpec::Exhaustive2d {
                    candidate_edges: edges,
                })
            }
            other => Err(Error::config(format!("unknown backend '{other}'"))),
        }
    }

    pub fn build_unit_cell(&self) -> Result<UnitCell> {
        let g = self
            .grid
            .as_ref()
            .ok_or_else(|| Error::config("missing [grid] section (cell dimension)"))?;
        let m = self
            .medium
            .as_ref()
            .ok_or_else(|| Error::config("missing [medium] section"))?;
        let cell = UnitCell {
            dim: g.dimension,
            bulk: self.pattern(&m.bulk)?,
            toughness: self.pattern(&m.toughness)?,
            toughness_anisotropy: m.anisotropy,
            p: m.p,
        };
        cell.validate()?;
        Ok(cell)
    }

    pub fn build_table_plan(&self) -> Result<TablePlan> {
        let c = self
            .cell
            .as_ref()
            .ok_or_else(|| Error::config("missing [cell] section"))?;
        Ok(TablePlan {
            n_directions: c.directions,
            magnitudes: c.magnitudes.clone(),
            resolution: c.resolution,
            strip_v: c.strip_v,
            max_run: c.max_run,
        })
    }

    pub fn build_sigma(&self, alpha: f64) -> Result<(Grid, SequenceDescriptor, SigmaProbeConfig)> {
        let s = self
            .sigma
            .as_ref()
            .ok_or_else(|| Error::config("missing [sigma] section"))?;
        let grid = build_grid(
            2,
            &[2.0, 2.0],
            &[s.resolution, s.resolution],
            DirichletSpec::Empty,
        )?;
        let descriptor = match s.generator.as_str() {
            "teeth" => SequenceDescriptor::Teeth,
            "fixed-line" => SequenceDescriptor::FixedLine,
            "fraction" => SequenceDescriptor::Fraction {
                a: s.fraction
                    .ok_or_else(|| Error::config("fraction generator needs 'fraction'"))?,
            },
            "custom" => {
                let csv = s
                    .custom_csv
                    .as_ref()
                    .ok_or_else(|| Error::config("custom generator needs custom_csv"))?;
                let rows = read_indexed_csv(&self.resolve(csv))?;
                SequenceDescriptor::CustomEdges {
                    edges: rows.into_iter().map(|(i, _)| i).collect(),
                }
            }
            other => return Err(Error::config(format!("unknown generator '{other}'"))),
        };
        let cfg = SigmaProbeConfig {
            centers: s.centers.clone(),
            radii: s.radii.clone(),
            n_list: s.n_list.clone(),
            normal: parse_axis(&s.normal)?,
            tau: s.tau.unwrap_or(0.05 * alpha),
        };
        Ok((grid, descriptor, cfg))
    }

    pub fn build_sweep(&self) -> Result<SweepConfig> {
        let s = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::config("missing [sweep] section"))?;
        let t = self
            .time
            .as_ref()
            .ok_or_else(|| Error::config("missing [time] section"))?;
        let (t_end, delta) = match (t.t_end, t.delta) {
            (Some(te), Some(d)) => (te, d),
            _ => return Err(Error::config("[time] needs t_end and delta for a sweep")),
        };
        let d = self.datum.as_ref().map(|d| d.magnitude).unwrap_or(1.0);
        Ok(SweepConfig {
            cell: self.build_unit_cell()?,
            epsilons: s.epsilons.clone(),
            cells_per_period: s.cells_per_period.clone(),
            t_end,
            delta,
            datum_magnitude: d,
            hom_resolution: s.hom_resolution,
            hom_grid_cells: s.hom_grid_cells,
            tol_last: s.tol_last,
            tol_margin: s.tol_margin,
        })
    }
}

fn parse_axis(s: &str) -> Result<Axis> {
    match s {
        "x" | "X" => Ok(Axis::X),
        "y" | "Y" => Ok(Axis::Y),
        other => Err(Error::config(format!("unknown axis '{other}'"))),
    }
}

/// Ramp profile: 0 at the low end, `magnitude` at the high end of the axis.
fn stretch_profile(grid: &Grid, magnitude: f64, axis: Axis) -> Vec<f64> {
    let counts = grid.counts();
    grid.dirichlet_nodes()
        .iter()
        .map(|&n| {
            let (i, j) = grid.node_coords(n);
            let high = match axis {
                Axis::X => i == counts[0] - 1,
                Axis::Y => j == counts[1] - 1,
            };
            if high {
                magnitude
            } else {
                0.0
            }
        })
        .collect()
}

fn profile_from_csv(grid: &Grid, path: &Path) -> Result<Vec<f64>> {
    let rows = read_indexed_csv(path)?;
    let mut profile = vec![0.0f64; grid.dirichlet_nodes().len()];
    for (node, value) in rows {
        match grid.dirichlet_rank(node) {
            Some(rank) => profile[rank] = value,
            None => {
                return Err(Error::config(format!(
                    "profile row names node {node}, which is not a Dirichlet node"
                )))
            }
        }
    }
    Ok(profile)
}

/// CSV with a header row and two columns: index, value.
fn read_indexed_csv(path: &Path) -> Result<Vec<(usize, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read table {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 {
            continue; // header
        }
        let mut parts = line.split(',');
        let idx: usize = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| {
                Error::config(format!("{}:{}: bad index", path.display(), lineno + 1))
            })?;
        let val: f64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| {
                Error::config(format!("{}:{}: bad value", path.display(), lineno + 1))
            })?;
        out.push((idx, val));
    }
    Ok(out)
}

/// Datum table CSV: header, then one row per time step: time, v0, v1, ...
fn datum_rows_from_csv(path: &Path, n_ranks: usize) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read datum table {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || lineno == 0 {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::config(format!("{}:{}: bad row", path.display(), lineno + 1)))?;
        if vals.len() != n_ranks {
            return Err(Error::config(format!(
                "{}:{}: expected {} values, got {}",
                path.display(),
                lineno + 1,
                n_ranks,
                vals.len()
            )));
        }
        rows.push(vals);
    }
    Ok(rows)
}

fn densify(rows: Vec<(usize, f64)>, len: usize) -> Result<Vec<f64>> {
    let mut out = vec![f64::NAN; len];
    for (i, v) in rows {
        if i >= len {
            return Err(Error::config(format!(
                "table index {i} out of range (< {len})"
            )));
        }
        out[i] = v;
    }
    if let Some(missing) = out.iter().position(|v| v.is_nan()) {
        return Err(Error::config(format!("table is missing index {missing}")));
    }
    Ok(out)
}

fn nearest_edge_kappa(grid: &Grid, kappa: &[f64], node: usize) -> f64 {
    // the edge incident to the node along the boundary face normal; in 1D
    // this is the single incident edge
    let (i, j) = grid.node_coords(node);
    let counts = grid.counts();
    if grid.dim() == 1 {
        let e = if i == 0 {
            grid.x_edge_id(0, 0)
        } else {
            grid.x_edge_id(counts[0] - 2, 0)
        };
        return kappa[e];
    }
    // prefer the edge pointing into the domain from the face the node sits on
    if j == 0 {
        kappa[grid.y_edge_id(i, 0)]
    } else if j == counts[1] - 1 {
        kappa[grid.y_edge_id(i, counts[1] - 2)]
    } else if i == 0 {
        kappa[grid.x_edge_id(0, j)]
    } else {
        kappa[grid.x_edge_id(counts[0] - 2, j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> RunConfig {
        let mut cfg: RunConfig = toml::from_str(text).unwrap();
        cfg.base_dir = PathBuf::from(".");
        cfg
    }

    #[test]
    fn minimal_evolve_config() {
        let cfg = parse(
            r#"
            [grid]
            dimension = 1
            extent = [1.0]
            nodes = [201]
            dirichlet = "ends"

            [medium]
            p = 2.0
            bulk = { kind = "constant", value = 1.0 }
            toughness = { kind = "constant", value = 1.0 }

            [datum]
            kind = "ramp"
            profile = "stretch-x"

            [time]
            t_end = 1.2
            delta = 0.01

            [evolution]
            backend = "exhaustive-1d"
            "#,
        );
        let grid = cfg.build_grid().unwrap();
        let medium = cfg.build_medium(&grid).unwrap();
        let datum = cfg.build_datum(&grid).unwrap();
        assert_eq!(grid.node_count(), 201);
        assert_eq!(medium.p(), 2.0);
        assert_eq!(datum.n_steps(), 121);
        assert!(matches!(
            cfg.build_backend().unwrap(),
            BackendSpec::Exhaustive1d { .. }
        ));
    }

    #[test]
    fn periodic_medium_from_config() {
        let cfg = parse(
            r#"
            [grid]
            dimension = 1
            extent = [1.0]
            nodes = [33]
            dirichlet = "ends"

            [medium]
            epsilon = 0.25
            bulk = { kind = "layered", axis = "x", boundaries = [0.0, 0.5], values = [1.0, 4.0] }
            toughness = { kind = "constant", value = 1.0 }
            "#,
        );
        let grid = cfg.build_grid().unwrap();
        let medium = cfg.build_medium(&grid).unwrap();
        // 32 cells, 8 per period, alternating 4 + 4
        assert_eq!(medium.a_cells()[0], 1.0);
        assert_eq!(medium.a_cells()[4], 4.0);
        assert_eq!(medium.a_cells()[8], 1.0);
    }

    #[test]
    fn unknown_fields_rejected() {
        let r: std::result::Result<RunConfig, _> = toml::from_str(
            r#"
            [grid]
            dimension = 1
            extent = [1.0]
            nodes = [11]
            typo_field = 3
            "#,
        );
        assert!(r.is_err());
    }

    #[test]
    fn explicit_tables_from_csv() {
        let dir = std::env::temp_dir().join("homfrac_config_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let mut cells = String::from("cell,value\n");
        for c in 0..4 {
            cells.push_str(&format!("{c},{}\n", 1.0 + c as f64));
        }
        std::fs::write(dir.join("cells.csv"), cells).unwrap();
        let mut edges = String::from("edge,value\n");
        for e in 0..4 {
            edges.push_str(&format!("{e},{}\n", 2.0 + e as f64 * 0.5));
        }
        std::fs::write(dir.join("edges.csv"), edges).unwrap();

        let mut cfg = parse(
            r#"
            [grid]
            dimension = 1
            extent = [1.0]
            nodes = [5]
            dirichlet = "ends"

            [medium]
            bulk = { kind = "cells-csv", csv = "cells.csv" }
            toughness = { kind = "edges-csv", csv = "edges.csv" }
            "#,
        );
        cfg.base_dir = dir.clone();
        let grid = cfg.build_grid().unwrap();
        let medium = cfg.build_medium(&grid).unwrap();
        assert_eq!(medium.a_cells(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(medium.kappa_edge(3), 3.5);
        // missing index is rejected
        std::fs::write(dir.join("cells.csv"), "cell,value\n0,1.0\n").unwrap();
        assert!(cfg.build_medium(&grid).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn sigma_config_roundtrip() {
        let cfg = parse(
            r#"
            [sigma]
            generator = "fraction"
            fraction = 0.5
            resolution = 65
            centers = [[0.0, 0.0]]
            radii = [0.5]
            n_list = [8]
            normal = "y"
            "#,
        );
        let (grid, desc, scfg) = cfg.build_sigma(1.0).unwrap();
        assert_eq!(grid.counts()[0], 65);
        assert!(matches!(desc, SequenceDescriptor::Fraction { .. }));
        assert!((scfg.tau - 0.05).abs() < 1e-15);
    }
}
