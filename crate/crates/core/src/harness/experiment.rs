use crate::error::{Error, Result};
use crate::game::Game;
use crate::generator::random_zero_sum;
use crate::solvers::{run, Init, RunOptions, SolverKind, TraceRow};

use super::config::ExperimentConfig;
use super::trace::write_trace_file;

/// Caps worker threads; unset or `0` means one per core.
pub const THREADS_ENV: &str = "EQ_THREADS";

/// Mixed into the game seed to draw each run's initial pure profile.
const INIT_SALT: u64 = 0x1217_5EED_D00D_CAFE;

pub fn thread_limit() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))),
    }
}

/// Runs every (solver, seed) pair and returns all rows sorted by
/// `(solver name, game_seed, iteration)`.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<TraceRow>> {
    config.validate()?;
    let games: Vec<(u64, Game)> = config
        .seeds()
        .map(|seed| random_zero_sum(config.rows, config.cols, seed).map(|g| (seed, g)))
        .collect::<Result<_>>()?;
    let schedule = config.schedule();
    let jobs: Vec<(SolverKind, usize)> = config
        .solvers
        .iter()
        .flat_map(|&k| (0..games.len()).map(move |g| (k, g)))
        .collect();

    let job = |&(kind, g): &(SolverKind, usize)| -> Result<Vec<TraceRow>> {
        let (seed, game) = &games[g];
        let opts = RunOptions {
            init: Init::Seeded(seed ^ INIT_SALT),
            game_seed: *seed,
            ..RunOptions::new(config.max_iterations, config.max_weight, schedule.clone())
        };
        Ok(run(kind, game, &opts)?.rows)
    };
    let per_run = execute(&jobs, job)?;

    let mut rows: Vec<TraceRow> = per_run.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (a.solver.name(), a.game_seed, a.iteration).cmp(&(b.solver.name(), b.game_seed, b.iteration))
    });
    Ok(rows)
}

#[cfg(feature = "parallel")]
fn execute<F>(jobs: &[(SolverKind, usize)], job: F) -> Result<Vec<Vec<TraceRow>>>
where
    F: Fn(&(SolverKind, usize)) -> Result<Vec<TraceRow>> + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_limit()?)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| jobs.par_iter().map(job).collect())
}

#[cfg(not(feature = "parallel"))]
fn execute<F>(jobs: &[(SolverKind, usize)], job: F) -> Result<Vec<Vec<TraceRow>>>
where
    F: Fn(&(SolverKind, usize)) -> Result<Vec<TraceRow>>,
{
    thread_limit()?;
    jobs.iter().map(job).collect()
}

/// [`run_sweep`], then writes the rows to `config.output_path`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TraceRow>> {
    let rows = run_sweep(config)?;
    write_trace_file(&config.output_path, &rows)?;
    Ok(rows)
}
