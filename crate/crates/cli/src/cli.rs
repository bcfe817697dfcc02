//! Command-line front end. Exit codes: 0 when every enabled check passes,
//! 1 when a check fails, 2 on usage, configuration or I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pathcover_core::analytics::{predict_degree_count, predict_two_core_size, solve_two_core_x};
use pathcover_core::cover::{exact_mu, mu_target};
use pathcover_core::graph::Graph;
use pathcover_core::pipeline::solve;
use serde::Serialize;

use crate::config::{Check, ExperimentConfig, Format};
use crate::error::{CliError, Result};
use crate::experiment::{prepare_output, render, run_experiment, write_reports, Execution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pathcover",
    version,
    about = "Path covers of sparse random graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte Carlo experiment over G(n, c/n).
    Run(RunArgs),
    /// Compute a path cover of a graph read from an edge-list file.
    Solve(SolveArgs),
    /// Exact path cover number of a small graph (at most 22 vertices).
    Oracle(OracleArgs),
    /// Closed-form predictions for given c and n.
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML file with any of the options below; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of vertices [default: 10000].
    #[arg(long)]
    pub n: Option<usize>,
    /// Average degree; repeat for a grid [default: 8].
    #[arg(long = "c")]
    pub c: Vec<f64>,
    /// Trials per value of c [default: 10].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed; trial i uses splitmix64(seed ^ splitmix64(i)) [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Γ₀ edges chosen per vertex [default: max(3, ⌊c/1000⌋)].
    #[arg(long)]
    pub gamma_cap: Option<usize>,
    /// SMALL threshold [default: max(2, ⌊c/1000⌋)].
    #[arg(long)]
    pub small_deg: Option<usize>,
    /// LARGE threshold [default: ⌈20c⌉].
    #[arg(long)]
    pub large_deg: Option<usize>,
    /// CLOSE radius [default: 4].
    #[arg(long)]
    pub close_radius: Option<usize>,
    /// Booster budget per attempt [default: |V(G*)|].
    #[arg(long)]
    pub budget: Option<usize>,
    /// Extra Γ₀ attempts after a failure [default: 3].
    #[arg(long)]
    pub retries: Option<usize>,
    /// Compute the exact path cover number (n ≤ 16) and check against it.
    #[arg(long)]
    pub oracle: bool,
    /// Checks deciding the exit status; repeatable [default: cover].
    #[arg(long = "check", value_enum)]
    pub checks: Vec<Check>,
    /// Directory for the reports; without it the summary goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report format [default: csv].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Run trials one at a time instead of on the thread pool.
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Edge-list file: "n m" followed by one "u v" line per edge.
    pub graph: PathBuf,
    /// Average degree used for the thresholds [default: 2m/n].
    #[arg(long = "c")]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the cover here, one path per line.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Average degree, greater than 1; repeatable.
    #[arg(long = "c", required = true)]
    pub c: Vec<f64>,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl RunArgs {
    pub fn into_config(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        set!(n, trials, seed, retries, format);
        macro_rules! set_some {
            ($($field:ident),*) => {$(
                if self.$field.is_some() {
                    cfg.$field = self.$field;
                }
            )*};
        }
        set_some!(gamma_cap, small_deg, large_deg, close_radius, budget, out);
        if !self.c.is_empty() {
            cfg.c = self.c;
        }
        if !self.checks.is_empty() {
            cfg.checks = self.checks;
        }
        if self.oracle {
            cfg.oracle = true;
            if !cfg.checks.contains(&Check::Oracle) {
                cfg.checks.push(Check::Oracle);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(Graph::from_edge_list(&text)?)
}

fn run(args: RunArgs, stdout: &mut dyn Write) -> Result<i32> {
    let serial = args.serial;
    let cfg = args.into_config()?;
    if let Some(dir) = &cfg.out {
        prepare_output(dir)?;
    }
    let execution = if serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let experiment = run_experiment(&cfg, execution)?;
    let io = |e| CliError::io("<stdout>", e);
    match &cfg.out {
        Some(dir) => {
            for path in write_reports(&experiment, dir, cfg.format)? {
                writeln!(stdout, "wrote {}", path.display()).map_err(io)?;
            }
        }
        None => {
            let files = render(&experiment.report, cfg.format)?;
            let (_, summary) = files
                .iter()
                .find(|(name, _)| name.starts_with("summary") || name.ends_with(".json"))
                .expect("every format renders a summary");
            stdout.write_all(summary).map_err(io)?;
        }
    }
    for check in &experiment.report.checks {
        let c = check.c.map(|c| format!(" c={c}")).unwrap_or_default();
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        eprintln!("{verdict} {:?}{c}: {}", check.check, check.detail);
    }
    Ok(if experiment.report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

#[derive(Serialize)]
struct Solved<'a> {
    n: usize,
    m: usize,
    c: f64,
    #[serde(flatten)]
    result: &'a pathcover_core::pipeline::PipelineResult,
}

fn solve_file(args: SolveArgs, stdout: &mut dyn Write) -> Result<i32> {
    let g = read_graph(&args.graph)?;
    let c = args
        .c
        .unwrap_or_else(|| 2.0 * g.m() as f64 / g.n().max(1) as f64);
    if !(c.is_finite() && c > 0.0) {
        return Err(CliError::Config(format!("c = {c} must be positive")));
    }
    let run = solve(
        &g,
        c,
        &pathcover_core::pipeline::PipelineConfig::for_c(c),
        args.seed,
    )?;
    if let Some(path) = &args.out {
        std::fs::write(path, run.result.cover.to_lines()).map_err(|e| CliError::io(path, e))?;
    }
    let solved = Solved {
        n: g.n(),
        m: g.m(),
        c,
        result: &run.result,
    };
    let mut text = serde_json::to_vec_pretty(&solved)?;
    text.push(b'\n');
    stdout
        .write_all(&text)
        .map_err(|e| CliError::io("<stdout>", e))?;
    Ok(if run.result.cover_valid {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn oracle_file(args: OracleArgs, stdout: &mut dyn Write) -> Result<i32> {
    let g = read_graph(&args.graph)?;
    let mu = exact_mu(&g)?;
    writeln!(stdout, "{mu}").map_err(|e| CliError::io("<stdout>", e))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PredictionRow {
    c: f64,
    n: usize,
    x: f64,
    two_core: f64,
    v0: f64,
    v1: f64,
    degree_bound: f64,
    target: f64,
}

fn predict(args: PredictArgs, stdout: &mut dyn Write) -> Result<i32> {
    let rows = args
        .c
        .iter()
        .map(|&c| {
            let v0 = predict_degree_count(0, c, args.n);
            let v1 = predict_degree_count(1, c, args.n);
            Ok(PredictionRow {
                c,
                n: args.n,
                x: solve_two_core_x(c)?,
                two_core: predict_two_core_size(c, args.n)?,
                v0,
                v1,
                degree_bound: v0 + v1 / 2.0,
                target: mu_target(c, args.n),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let bytes = match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)?;
            }
            w.into_inner()
                .map_err(|e| CliError::io("<buffer>", e.into_error()))?
        }
        Format::Json => {
            let mut text = serde_json::to_vec_pretty(&rows)?;
            text.push(b'\n');
            text
        }
    };
    stdout
        .write_all(&bytes)
        .map_err(|e| CliError::io("<stdout>", e))?;
    Ok(EXIT_OK)
}

pub fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Run(args) => run(args, stdout),
        Command::Solve(args) => solve_file(args, stdout),
        Command::Oracle(args) => oracle_file(args, stdout),
        Command::Predict(args) => predict(args, stdout),
    }
}

/// Parses `args` and runs the command, returning the exit code. Errors are
/// printed to stderr.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
