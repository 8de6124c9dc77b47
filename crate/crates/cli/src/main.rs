//! Command-line entry point: wires config files to the solvers and emits all
//! artifacts under the output directory.
//!
//! Exit codes: 0 success, 1 config error, 2 numerical failure (with a
//! diagnostic file), 3 invariant violation (with a witness file).

use clap::{Parser, Subcommand};
use homfrac::artifacts::{
    atomic_write, fmt_float, write_crack_log_csv, write_sigma_csv, write_solution_csv,
    write_sweep_csv, write_sweep_verdicts, write_table_csv, write_trace_csv,
};
use homfrac::cell::{build_table, scaling_check};
use homfrac::config::RunConfig;
use homfrac::error::Error;
use homfrac::evolution::{
    energy_balance_audit, run_evolution, validate_trace, verify_unilateral_minimality,
};
use homfrac::mincut::sigma_probe;
use homfrac::sweep::run_sweep;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "homfrac",
    about = "Quasistatic brittle fracture in heterogeneous media: evolutions, \
             surface-density probes, homogenization cell solvers and scale sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, default_value = "out", global = true)]
    out: PathBuf,

    /// Worker pool size; 1 forces fully sequential execution. Outputs are
    /// byte-identical across values.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for sampled verification families (deterministic paths ignore it).
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the effective density table of the configured unit cell.
    Cell,
    /// Run a quasistatic evolution and write the trace.
    Evolve,
    /// Run the epsilon sweep against the homogenized evolution.
    Sweep,
    /// Windowed crack-discounted surface density probes.
    SigmaProbe,
    /// Re-run the configured evolution and verify unilateral minimality.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("config error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized");
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            let (code, file) = match &err {
                Error::Config(_) => (1, None),
                Error::Numerical(_) => (2, Some("diagnostic.txt")),
                Error::Invariant(_) => (3, Some("witness.txt")),
                Error::Io(_) => (2, Some("diagnostic.txt")),
            };
            if let Some(name) = file {
                let _ = std::fs::create_dir_all(&cli.out);
                let _ = atomic_write(&cli.out.join(name), &format!("{err}\n"));
            }
            ExitCode::from(code)
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::config("--config is required"))?;
    RunConfig::load(path)
}

fn ensure_out(dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| {
        Error::config(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        ))
    })
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = load_config(cli)?;
    ensure_out(&cli.out)?;
    match cli.command {
        Command::Evolve => cmd_evolve(cli, &cfg),
        Command::Cell => cmd_cell(cli, &cfg),
        Command::Sweep => cmd_sweep(cli, &cfg),
        Command::SigmaProbe => cmd_sigma(cli, &cfg),
        Command::Verify => cmd_verify(cli, &cfg),
    }
}

fn cmd_evolve(cli: &Cli, cfg: &RunConfig) -> Result<(), Error> {
    let grid = cfg.build_grid()?;
    let medium = cfg.build_medium(&grid)?;
    let datum = cfg.build_datum(&grid)?;
    let backend = cfg.build_backend()?;
    if cli.verbose {
        eprintln!(
            "evolve: {} nodes, {} steps, backend {}",
            grid.node_count(),
            datum.n_steps(),
            backend.id()
        );
    }
    let trace = run_evolution(&grid, &medium, &datum, backend)?;
    validate_trace(&grid, &medium, &datum, &trace)?;
    write_trace_csv(&cli.out.join("trace.csv"), &trace)?;
    write_crack_log_csv(&cli.out.join("crack_log.csv"), &grid, &trace)?;
    let write_solutions = cfg
        .evolution
        .as_ref()
        .map(|e| e.write_solutions)
        .unwrap_or(false);
    if write_solutions {
        if let Some(last) = trace.steps.last() {
            write_solution_csv(&cli.out.join("solution_final.csv"), &last.field)?;
        }
    }
    let audit = energy_balance_audit(&trace);
    atomic_write(
        &cli.out.join("audit.txt"),
        &format!(
            "max_abs_residual = {}\ndelta_max = {}\n",
            fmt_float(audit.max_abs),
            fmt_float(trace.delta_max)
        ),
    )?;
    if cli.verbose {
        eprintln!(
            "evolve: done, {} cracked items",
            trace.final_crack.n_cracked()
        );
    }
    Ok(())
}

fn cmd_cell(cli: &Cli, cfg: &RunConfig) -> Result<(), Error> {
    let cell = cfg.build_unit_cell()?;
    let plan = cfg.build_table_plan()?;
    if cli.verbose {
        eprintln!(
            "cell: resolution {}, {} directions",
            plan.resolution, plan.n_directions
        );
    }
    let table = build_table(&cell, &plan)?;
    table.check_bounds()?;
    table.check_convexity(1e-8)?;
    table.check_homogeneity(1e-8)?;
    table.check_subadditivity(1e-6)?;
    table.check_wiener_bounds(&cell, plan.resolution)?;
    write_table_csv(&cli.out.join("effective_table.csv"), &table)?;
    // scaling/no-interaction report when factors are configured
    if let Some(c) = &cfg.cell {
        if let (Some(c1), Some(c2)) = (c.scaling_c1, c.scaling_c2) {
            let report = scaling_check(&cell, c1, c2, plan.resolution)?;
            let mut s = String::new();
            s.push_str(&format!(
                "c1 = {}\nc2 = {}\nmax_rel_bulk = {}\nmax_rel_surface = {}\npassed = {}\n",
                fmt_float(report.c1),
                fmt_float(report.c2),
                fmt_float(report.max_rel_bulk),
                fmt_float(report.max_rel_surface),
                report.passed()
            ));
            for f in &report.failures {
                s.push_str(&format!("failure: {f}\n"));
            }
            atomic_write(&cli.out.join("scaling.txt"), &s)?;
            if !report.passed() {
                return Err(Error::invariant(
                    "scaling check failed; see scaling.txt".to_string(),
                ));
            }
        }
    }
    Ok(())
}

fn cmd_sweep(cli: &Cli, cfg: &RunConfig) -> Result<(), Error> {
    let sweep_cfg = cfg.build_sweep()?;
    if cli.verbose {
        eprintln!("sweep: {} epsilon values", sweep_cfg.epsilons.len());
    }
    let report = run_sweep(&sweep_cfg)?;
    write_sweep_csv(&cli.out.join("sweep.csv"), &report)?;
    write_sweep_verdicts(&cli.out.join("verdicts.txt"), &report)?;
    Ok(())
}

fn cmd_sigma(cli: &Cli, cfg: &RunConfig) -> Result<(), Error> {
    // alpha for the default threshold: from the medium bounds when present
    let alpha = cfg.medium.as_ref().and_then(|m| m.alpha).unwrap_or(1.0);
    let (grid, descriptor, scfg) = cfg.build_sigma(alpha)?;
    if cli.verbose {
        eprintln!(
            "sigma-probe: {} nodes, {} centers x {} radii",
            grid.node_count(),
            scfg.centers.len(),
            scfg.radii.len()
        );
    }
    // probes run against the configured toughness when a medium is present,
    // otherwise against the plain surface measure
    let medium = cfg
        .medium
        .as_ref()
        .map(|_| cfg.build_medium(&grid))
        .transpose()?;
    let kappa = move |e: homfrac::EdgeId| -> f64 {
        medium.as_ref().map(|m| m.kappa_edge(e)).unwrap_or(1.0)
    };
    let reports = sigma_probe(&grid, &descriptor, &kappa, &scfg)?;
    write_sigma_csv(&cli.out.join("sigma.csv"), &reports)?;
    Ok(())
}

fn cmd_verify(cli: &Cli, cfg: &RunConfig) -> Result<(), Error> {
    let grid = cfg.build_grid()?;
    let medium = cfg.build_medium(&grid)?;
    let datum = cfg.build_datum(&grid)?;
    let backend = cfg.build_backend()?;
    let (budget, n_probes) = cfg
        .evolution
        .as_ref()
        .map(|e| (e.verify_budget, e.verify_steps))
        .unwrap_or((4096, 4));
    let trace = run_evolution(&grid, &medium, &datum, backend)?;
    validate_trace(&grid, &medium, &datum, &trace)?;

    // challenge family: configured verify edges, or every edge
    let candidate_edges: Vec<usize> = cfg
        .evolution
        .as_ref()
        .and_then(|e| e.verify_edges.clone())
        .unwrap_or_else(|| (0..grid.edge_count()).collect());

    let n_steps = trace.steps.len();
    let stride = (n_steps / n_probes.max(1)).max(1);
    let mut report_text = String::new();
    let mut worst = f64::INFINITY;
    let mut witness_text: Option<String> = None;
    let mut probe_steps: Vec<usize> = (0..n_steps).step_by(stride).collect();
    if !probe_steps.contains(&(n_steps - 1)) {
        probe_steps.push(n_steps - 1);
    }
    for i in probe_steps {
        let crack = trace.crack_at(&grid, &medium, i);
        let datum_vals = datum.values_at(i);
        let report = verify_unilateral_minimality(
            &grid,
            &medium,
            &crack,
            &datum_vals,
            &candidate_edges,
            budget,
            cli.seed,
        )?;
        report_text.push_str(&format!(
            "step {i}: checked = {} worst_margin = {} violations = {}\n",
            report.n_checked,
            fmt_float(report.worst_margin),
            report.violations
        ));
        worst = worst.min(report.worst_margin);
        if !report.passed() && witness_text.is_none() {
            witness_text = Some(format!(
                "step {i}: witness edges {:?}, margin {}\n",
                report
                    .witness
                    .as_ref()
                    .map(|w| w.edges.clone())
                    .unwrap_or_default(),
                fmt_float(report.worst_margin)
            ));
        }
    }
    report_text.push_str(&format!("worst_margin_overall = {}\n", fmt_float(worst)));
    atomic_write(&cli.out.join("verify.txt"), &report_text)?;
    if let Some(w) = witness_text {
        atomic_write(&cli.out.join("witness.txt"), &w)?;
        return Err(Error::invariant(format!(
            "unilateral minimality violated, worst margin {}",
            fmt_float(worst)
        )));
    }
    Ok(())
}
