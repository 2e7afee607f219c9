use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use eqsolve::generator::{named_game, random_zero_sum, NAMED_GAMES};
use eqsolve::harness::{
    confidence_interval, fit_loglog, median, read_trace_file, run_experiment, runs_of,
    verify_suite, write_trace, ExperimentConfig, SlopeFit,
};
use eqsolve::solvers::{run, EvalSchedule, Init, RunOptions};
use eqsolve::{Game, SolverKind, TraceRow};

#[derive(Parser)]
#[command(name = "eqsolve", version, about = "Equilibrium solvers and convergence benchmarks for normal-form games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a game file (seeded random zero-sum matrix or a named fixture)
    Gen(GenArgs),
    /// Run one solver on one game and write its trace as CSV
    Run(RunArgs),
    /// Run every solver on a batch of seeded random games
    Sweep(SweepArgs),
    /// Fit log-log convergence slopes to a trace CSV
    Fit(FitArgs),
    /// Run the built-in equivalence and invariant checks
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GameSource {
    /// Read the game from a file
    #[arg(long, conflicts_with_all = ["name", "rows", "cols"])]
    game: Option<PathBuf>,
    /// Use a named fixture
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(NAMED_GAMES))]
    name: Option<String>,
    #[arg(long, default_value_t = 10)]
    rows: usize,
    #[arg(long, default_value_t = 10)]
    cols: usize,
    /// Seed of the random game
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GameSource {
    fn load(&self) -> Result<Game> {
        if let Some(path) = &self.game {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            return text.parse().with_context(|| format!("parsing {}", path.display()));
        }
        if let Some(name) = &self.name {
            return Ok(named_game(name)?);
        }
        Ok(random_zero_sum(self.rows, self.cols, self.seed)?)
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: GameSource,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_solver)]
    solver: SolverKind,
    #[command(flatten)]
    source: GameSource,
    #[arg(long, default_value_t = 10_000)]
    iters: u64,
    #[arg(long, default_value_t = f64::INFINITY)]
    max_weight: f64,
    /// Log-spaced evaluation points (default: every rounded power of 1.25)
    #[arg(long)]
    points: Option<usize>,
    /// Seed for a random initial pure profile (default: action 0 for everyone)
    #[arg(long)]
    init_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// key=value file; flags given here override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated list, e.g. fp,rm,rm_plus,greedy_rm,dwfp
    #[arg(long, value_delimiter = ',', value_parser = parse_solver)]
    solvers: Option<Vec<SolverKind>>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    games: Option<usize>,
    /// First game seed; games use seed, seed+1, ...
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iters: Option<u64>,
    #[arg(long)]
    max_weight: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    oracle_delta: Option<f64>,
}

impl SweepArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)
                .with_context(|| format!("loading {}", path.display()))?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = &self.solvers {
            c.solvers = v.clone();
        }
        c.rows = self.rows.unwrap_or(c.rows);
        c.cols = self.cols.unwrap_or(c.cols);
        c.num_games = self.games.unwrap_or(c.num_games);
        c.base_seed = self.seed.unwrap_or(c.base_seed);
        c.max_iterations = self.iters.unwrap_or(c.max_iterations);
        c.max_weight = self.max_weight.unwrap_or(c.max_weight);
        c.eval_points = self.points.or(c.eval_points);
        c.output_path = self.out.clone().unwrap_or(c.output_path);
        c.oracle_delta = self.oracle_delta.unwrap_or(c.oracle_delta);
        c.validate()?;
        Ok(c)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Iteration,
    Weight,
    Time,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_solver)]
    solver: SolverKind,
    #[arg(long, value_enum, default_value_t = Axis::Iteration)]
    x: Axis,
    /// Smallest x included in the fit
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    /// Largest x included in the fit
    #[arg(long, default_value_t = f64::INFINITY)]
    hi: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Small budgets, a few seconds
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 1e-3)]
    oracle_delta: f64,
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.trim().parse().map_err(|e: eqsolve::Error| e.to_string())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn gen(args: &GenArgs) -> Result<()> {
    let game = args.source.load()?;
    let mut out = output(args.out.as_deref())?;
    write!(out, "{game}")?;
    out.flush()?;
    Ok(())
}

fn run_one(args: &RunArgs) -> Result<()> {
    let game = args.source.load()?;
    let schedule = match args.points {
        Some(n) if n < 2 => bail!("--points must be at least 2"),
        Some(n) => EvalSchedule::log_spaced(args.iters, n),
        None => EvalSchedule::geometric(args.iters),
    };
    let opts = RunOptions {
        init: args.init_seed.map_or(Init::Zero, Init::Seeded),
        game_seed: args.source.seed,
        ..RunOptions::new(args.iters, args.max_weight, schedule)
    };
    let result = run(args.solver, &game, &opts)?;
    write_trace(output(args.out.as_deref())?, &result.rows)?;
    if result.converged {
        eprintln!("converged to a pure equilibrium at iteration {}", result.rows.last().map_or(0, |r| r.iteration));
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let config = args.config()?;
    let rows = run_experiment(&config)?;
    eprintln!("wrote {} rows to {}", rows.len(), config.output_path.display());
    Ok(())
}

fn x_of(row: &TraceRow, axis: Axis) -> f64 {
    match axis {
        Axis::Iteration => row.iteration as f64,
        Axis::Weight => row.cumulative_weight,
        Axis::Time => row.wall_time_ns as f64,
    }
}

fn print_fit(label: &str, fit: &SlopeFit) {
    println!(
        "{label}: slope={:.6} intercept={:.6} r_squared={:.6} fit_range=[{}, {}] points={}",
        fit.slope, fit.intercept, fit.r_squared, fit.fit_range.0, fit.fit_range.1, fit.points
    );
}

fn fit(args: &FitArgs) -> Result<()> {
    let rows = read_trace_file(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let runs = runs_of(&rows, args.solver);
    if runs.is_empty() {
        bail!("no rows for solver {} in {}", args.solver, args.input.display());
    }
    let points = |run: &[TraceRow]| -> Vec<(f64, f64)> {
        run.iter().map(|r| (x_of(r, args.x), r.exploitability)).collect()
    };
    let pooled: Vec<(f64, f64)> = runs.values().flat_map(|run| points(run)).collect();
    print_fit("pooled", &fit_loglog(&pooled, args.lo, args.hi)?);

    let slopes: Vec<f64> = runs
        .values()
        .filter_map(|run| fit_loglog(&points(run), args.lo, args.hi).ok())
        .map(|f| f.slope)
        .collect();
    println!("games={} fitted={}", runs.len(), slopes.len());
    if let Some(m) = median(&slopes) {
        println!("median_slope={m:.6}");
    }
    if slopes.len() >= 2 {
        let (mean, lo, hi) = confidence_interval(&slopes)?;
        println!("mean_slope={mean:.6} ci95=[{lo:.6}, {hi:.6}]");
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<()> {
    let checks = verify_suite(args.quick, args.oracle_delta)?;
    let mut failed = 0;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        bail!("{failed} of {} checks failed", checks.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run_one(a),
        Command::Sweep(a) => sweep(a),
        Command::Fit(a) => fit(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
