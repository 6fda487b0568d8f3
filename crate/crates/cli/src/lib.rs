//! Command-line front end for the WENO-DeC Euler solver.
//!
//! Subcommands: `run` (one simulation), `converge` (error tables over mesh
//! refinements), `compare` (every order/flux pair on one mesh) and
//! `riemann-exact` (the exact solver on its own). All output is CSV.

pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use wenodec_core::bench::{
    case, diagonal_slice, error_norms, exact_averages, measure, reference_run, run_case, slice_l1_distance, CaseSpec,
    ConvergenceTable, ErrorReport, ExactKind, Solution, CASE_IDS,
};
use wenodec_core::fv::SolverConfig;
use wenodec_core::riemann::{sample, solve_star, RiemannStates};
use wenodec_core::{FluxScheme, GasModel, Primitive, VariableMode};

use output::{emit_convergence, emit_profile, num, writer};

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "WENODEC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "wenodec",
    version,
    about = "High-order WENO-DeC finite-volume benchmarks for the Euler equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write the final profile.
    Run(RunArgs),
    /// Convergence tables over a list of resolutions, one CSV per (order, flux).
    Converge(ConvergeArgs),
    /// Every (order, flux) pair on one mesh, with profiles and a summary.
    Compare(CompareArgs),
    /// Sample the exact Riemann solution.
    RiemannExact(RiemannArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Characteristic,
    Conserved,
}

impl From<Mode> for VariableMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Characteristic => VariableMode::Characteristic,
            Mode::Conserved => VariableMode::Conserved,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Case identifier (see --help of `riemann-exact` for Riemann data).
    #[arg(long, value_parser = parse_case)]
    pub case: String,
    /// CFL number [default: the case's, 0.95 in 1D and 0.45 in 2D].
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Final time [default: the case's].
    #[arg(long = "t-final")]
    pub t_final: Option<f64>,
    /// Variables the WENO reconstruction acts on.
    #[arg(long, value_enum, default_value_t = Mode::Characteristic)]
    pub mode: Mode,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: Common,
    /// Space-time order (1, 3, 5 or 7; 1 is piecewise constant with forward Euler).
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    /// Numerical flux: lxf, force, rus, hll, cu, ldcu, hllc or exact.
    #[arg(long, value_parser = parse_flux, default_value = "hllc")]
    pub flux: FluxScheme,
    /// Cells per direction [default: the case's].
    #[arg(long = "N", alias = "n")]
    pub n: Option<usize>,
    /// Use the second-order MUSCL/SSPRK2 reference solver instead.
    #[arg(long)]
    pub reference: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated orders.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub orders: Vec<usize>,
    /// Comma-separated flux names, or `all`.
    #[arg(long, value_parser = parse_fluxes, default_value = "all")]
    pub fluxes: FluxList,
    /// Comma-separated resolutions.
    #[arg(long = "N", alias = "n", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Fill the runtime column with wall-clock seconds (makes output non-reproducible).
    #[arg(long = "record-timing")]
    pub record_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated orders.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub orders: Vec<usize>,
    /// Comma-separated flux names, or `all`.
    #[arg(long, value_parser = parse_fluxes, default_value = "all")]
    pub fluxes: FluxList,
    /// Cells per direction [default: the case's].
    #[arg(long = "N", alias = "n")]
    pub n: Option<usize>,
    /// Also compute a MUSCL reference solution with this many cells per
    /// direction and report the L1 density distance to it.
    #[arg(long)]
    pub reference: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RiemannArgs {
    /// Take the data of a catalog Riemann problem (rp1, rp5, rp6, rp7).
    #[arg(long, value_parser = parse_case, conflicts_with_all = ["left", "right"])]
    pub case: Option<String>,
    /// Left state `rho,u,p`.
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true, requires = "right")]
    pub left: Option<Primitive>,
    /// Right state `rho,u,p`.
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true, requires = "left")]
    pub right: Option<Primitive>,
    /// Discontinuity position.
    #[arg(long = "x-d", default_value_t = 0.5)]
    pub x_d: f64,
    /// Sampling time [default: the case's final time, or 0.2].
    #[arg(long)]
    pub t: Option<f64>,
    /// Domain `a,b`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0,1")]
    pub domain: (f64, f64),
    /// Number of equally spaced sample points (cell centres).
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Output file.
    #[arg(long, default_value = "riemann_exact.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FluxList(pub Vec<FluxScheme>);

fn parse_case(s: &str) -> Result<String, String> {
    case(s)
        .map(|c| c.id.to_string())
        .map_err(|_| format!("unknown case '{s}' (expected one of {})", CASE_IDS.join(", ")))
}

fn parse_flux(s: &str) -> Result<FluxScheme, String> {
    s.parse::<FluxScheme>().map_err(|e| e.to_string())
}

fn parse_fluxes(s: &str) -> Result<FluxList, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(FluxList(FluxScheme::ALL.to_vec()));
    }
    s.split(',')
        .map(|t| parse_flux(t.trim()))
        .collect::<Result<_, _>>()
        .map(FluxList)
}

fn parse_numbers<const K: usize>(s: &str) -> Result<[f64; K], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|_| format!("expected {K} comma-separated numbers, got '{s}'"))
}

fn parse_state(s: &str) -> Result<Primitive, String> {
    let [rho, u, p] = parse_numbers::<3>(s)?;
    Ok(Primitive::new_1d(rho, u, p))
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let [a, b] = parse_numbers::<2>(s)?;
    if !(a < b) {
        return Err(format!("empty domain '{s}'"));
    }
    Ok((a, b))
}

/// What a command produced, for callers that want more than the files.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Files(Vec<PathBuf>),
    Crashed(String),
}

/// Parse `argv` and execute. Usage errors surface as `clap::Error`.
pub fn run_cli<I, T>(argv: I) -> std::result::Result<Result<Outcome>, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    Ok(execute(&cli.command))
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Run(a) => cmd_run(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Compare(a) => cmd_compare(a),
        Command::RiemannExact(a) => cmd_riemann(a),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .with_context(|| format!("{THREADS_ENV}='{v}' is not a thread count"))?;
        builder = builder.num_threads(n);
    }
    builder.build().context("cannot start worker threads")
}

pub fn solver_config(spec: &CaseSpec, common: &Common, order: usize, flux: FluxScheme) -> Result<SolverConfig> {
    if !matches!(order, 1 | 3 | 5 | 7) {
        bail!("unsupported order {order} (expected 1, 3, 5 or 7)");
    }
    let mut cfg = SolverConfig::weno_dec(
        order,
        flux,
        common.cfl.unwrap_or(spec.cfl),
        common.t_final.unwrap_or(spec.default_t_final(order)),
    );
    cfg.mode = common.mode.into();
    Ok(cfg)
}

fn stem(spec: &CaseSpec, order: usize, flux: FluxScheme, n: usize) -> String {
    format!("{}_o{order}_{flux}_N{n}", spec.id)
}

fn cmd_run(a: &RunArgs) -> Result<Outcome> {
    let spec = case(&a.common.case)?;
    let n = a.n.unwrap_or(spec.default_n);
    let (result, name) = if a.reference {
        if a.common.cfl.is_some() || a.common.t_final.is_some() {
            let cfl = a.common.cfl.unwrap_or(if spec.dim == 1 { 0.5 } else { 0.25 });
            let cfg = SolverConfig::muscl(cfl, a.common.t_final.unwrap_or(spec.t_final));
            (run_case(&spec, &cfg, n), format!("{}_reference_N{n}", spec.id))
        } else {
            (reference_run(&spec, n), format!("{}_reference_N{n}", spec.id))
        }
    } else {
        let cfg = solver_config(&spec, &a.common, a.order, a.flux)?;
        (run_case(&spec, &cfg, n), stem(&spec, a.order, a.flux, n))
    };
    match result {
        Ok(sol) => Ok(Outcome::Files(emit_profile(
            &sol,
            &spec,
            &GasModel::default(),
            &a.common.out,
            &name,
        )?)),
        Err(e) if e.is_crash() => Ok(Outcome::Crashed(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn timed_measure(spec: &CaseSpec, cfg: &SolverConfig, n: usize, record: bool) -> Result<ErrorReport> {
    let start = Instant::now();
    let mut r = measure(spec, cfg, n)?;
    if record {
        r.runtime = Some(start.elapsed().as_secs_f64());
    }
    Ok(r)
}

fn cmd_converge(a: &ConvergeArgs) -> Result<Outcome> {
    let spec = case(&a.common.case)?;
    if spec.exact == ExactKind::ReferenceRun {
        bail!(
            "case '{}' has no exact solution; use `compare --reference` instead",
            spec.id
        );
    }
    let mut jobs = Vec::new();
    for &order in &a.orders {
        for &flux in &a.fluxes.0 {
            let cfg = solver_config(&spec, &a.common, order, flux)?;
            for &n in &a.n {
                jobs.push((order, flux, n, cfg.clone()));
            }
        }
    }
    let pool = thread_pool()?;
    let reports: Vec<ErrorReport> = pool.install(|| {
        jobs.par_iter()
            .map(|(_, _, n, cfg)| timed_measure(&spec, cfg, *n, a.record_timing))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut files = Vec::new();
    for (k, chunk) in reports.chunks(a.n.len()).enumerate() {
        let (order, flux, _, _) = jobs[k * a.n.len()];
        let table = ConvergenceTable::from_reports(chunk.to_vec());
        let path = a
            .common
            .out
            .join(format!("{}_o{order}_{flux}_convergence.csv", spec.id));
        emit_convergence(&table, &path)?;
        files.push(path);
    }
    Ok(Outcome::Files(files))
}

/// Block-average a fine 1D density onto `n` cells.
fn coarsen(fine: &[f64], n: usize) -> Result<Vec<f64>> {
    if fine.len() % n != 0 {
        bail!("reference resolution {} is not a multiple of {n}", fine.len());
    }
    let k = fine.len() / n;
    Ok(fine.chunks(k).map(|c| c.iter().sum::<f64>() / k as f64).collect())
}

/// L1 density distance between a solution and a reference solution on the
/// same domain: cell-wise in 1D, along the diagonal slice in 2D.
pub fn reference_distance(sol: &Solution, reference: &Solution, gas: &GasModel) -> Result<f64> {
    match (sol, reference) {
        (Solution::D1(a), Solution::D1(_)) => {
            let r = coarsen(&reference.density(), a.mesh.nx)?;
            Ok(sol.density().iter().zip(&r).map(|(x, y)| (x - y).abs()).sum::<f64>() * a.mesh.dx)
        }
        (Solution::D2(a), Solution::D2(b)) => Ok(slice_l1_distance(
            &diagonal_slice(&a.mesh, &a.field, gas)?,
            &diagonal_slice(&b.mesh, &b.field, gas)?,
        )),
        _ => bail!("reference dimension mismatch"),
    }
}

struct CompareRow<'a> {
    order: usize,
    flux: FluxScheme,
    cfg: &'a SolverConfig,
    solution: Result<Solution, String>,
}

fn cmd_compare(a: &CompareArgs) -> Result<Outcome> {
    let spec = case(&a.common.case)?;
    let n = a.n.unwrap_or(spec.default_n);
    let gas = GasModel::default();
    let mut jobs = Vec::new();
    for &order in &a.orders {
        for &flux in &a.fluxes.0 {
            jobs.push((order, flux, solver_config(&spec, &a.common, order, flux)?));
        }
    }
    let pool = thread_pool()?;
    let rows: Vec<CompareRow> = pool.install(|| {
        jobs.par_iter()
            .map(|(order, flux, cfg)| {
                let solution = match run_case(&spec, cfg, n) {
                    Ok(s) => Ok(s),
                    Err(e) if e.is_crash() => Err(e.to_string()),
                    Err(e) => return Err(anyhow::Error::from(e)),
                };
                Ok(CompareRow {
                    order: *order,
                    flux: *flux,
                    cfg,
                    solution,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut files = Vec::new();
    let reference = match a.reference {
        Some(nr) => {
            let r = reference_run(&spec, nr).context("reference run failed")?;
            let name = format!("{}_reference_N{nr}", spec.id);
            files.extend(emit_profile(&r, &spec, &gas, &a.common.out, &name)?);
            Some(r)
        }
        None => None,
    };
    let summary = a.common.out.join(format!("{}_compare_N{n}.csv", spec.id));
    let mut w = writer(&summary)?;
    w.write_record([
        "order",
        "flux",
        "N",
        "cfl",
        "steps",
        "crashed",
        "L1_rho",
        "L1_rho_reference",
    ])?;
    for row in &rows {
        match &row.solution {
            Ok(sol) => {
                files.extend(emit_profile(
                    sol,
                    &spec,
                    &gas,
                    &a.common.out,
                    &stem(&spec, row.order, row.flux, n),
                )?);
                let l1 = match spec.exact {
                    ExactKind::ReferenceRun => String::new(),
                    _ => num(exact_l1(&spec, row.cfg, sol)?),
                };
                let dist = match &reference {
                    Some(r) => num(reference_distance(sol, r, &gas)?),
                    None => String::new(),
                };
                w.write_record([
                    row.order.to_string(),
                    row.flux.to_string(),
                    n.to_string(),
                    num(row.cfg.cfl),
                    sol.steps().to_string(),
                    "false".into(),
                    l1,
                    dist,
                ])?;
            }
            Err(msg) => {
                eprintln!("{} order {} {}: {msg}", spec.id, row.order, row.flux);
                w.write_record([
                    row.order.to_string(),
                    row.flux.to_string(),
                    n.to_string(),
                    num(row.cfg.cfl),
                    String::new(),
                    "true".into(),
                    String::new(),
                    String::new(),
                ])?;
            }
        }
    }
    w.flush()?;
    files.push(summary);
    Ok(Outcome::Files(files))
}

fn exact_l1(spec: &CaseSpec, cfg: &SolverConfig, sol: &Solution) -> Result<f64> {
    let points = cfg.init_points();
    let norms = match sol {
        Solution::D1(o) => error_norms(
            &o.mesh,
            &o.field,
            &exact_averages::<3>(spec, &o.mesh, points, o.time, &cfg.gas)?,
        )?,
        Solution::D2(o) => error_norms(
            &o.mesh,
            &o.field,
            &exact_averages::<4>(spec, &o.mesh, points, o.time, &cfg.gas)?,
        )?,
    };
    Ok(norms.l1[0])
}

fn cmd_riemann(a: &RiemannArgs) -> Result<Outcome> {
    let gas = GasModel::default();
    let (states, x_d, t, domain) = match &a.case {
        Some(id) => {
            let spec = case(id)?;
            let Some((states, x_d)) = spec.riemann_data() else {
                bail!("case '{id}' is not a Riemann problem");
            };
            (states, x_d, a.t.unwrap_or(spec.t_final), spec.x)
        }
        None => match (a.left, a.right) {
            (Some(l), Some(r)) => (RiemannStates::new(l, r), a.x_d, a.t.unwrap_or(0.2), a.domain),
            _ => bail!("give either --case or both --left and --right"),
        },
    };
    if !(t > 0.0) {
        bail!("sampling time must be positive");
    }
    if a.samples == 0 {
        bail!("need at least one sample");
    }
    let star = solve_star(&states, &gas)?;
    write_riemann(&a.out, &states, &star, x_d, t, domain, a.samples, &gas)?;
    eprintln!("p* = {}, u* = {}", num(star.p_star), num(star.u_star));
    Ok(Outcome::Files(vec![a.out.clone()]))
}

#[allow(clippy::too_many_arguments)]
fn write_riemann(
    path: &Path,
    states: &RiemannStates,
    star: &wenodec_core::riemann::StarRegion,
    x_d: f64,
    t: f64,
    domain: (f64, f64),
    samples: usize,
    gas: &GasModel,
) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["x", "rho", "u", "p"])?;
    let h = (domain.1 - domain.0) / samples as f64;
    for k in 0..samples {
        let x = domain.0 + (k as f64 + 0.5) * h;
        let s = sample(states, star, (x - x_d) / t, gas);
        w.write_record([num(x), num(s.rho), num(s.u), num(s.p)])?;
    }
    w.flush()?;
    Ok(())
}

/// Run the CLI as a process: usage errors exit with 2, failures and
/// crashed single runs with 1.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match execute(&cli.command) {
        Ok(Outcome::Files(files)) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Ok(Outcome::Crashed(msg)) => {
            eprintln!("simulation crashed: {msg}");
            1
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
