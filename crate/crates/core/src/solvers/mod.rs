//! Iterative equilibrium dynamics behind one stepping interface.
//!
//! Every solver starts from a pure profile σ₁, keeps a weighted time-average
//! σ̄ of its iterates, and reports its cumulative weight W. Exploitability is
//! always measured on σ̄.

mod dwfp;
mod fp;
mod regret;

use std::fmt;
use std::str::FromStr;

use web_time::Instant;

use crate::error::{Error, Result};
use crate::game::{Game, MixedStrategy, StrategyProfile};
use crate::generator::Prng;
use crate::metrics::exploitability;

pub use dwfp::{dwfp_gap, dwfp_speed, dwfp_weight, DwfpState};
pub use fp::FpState;
pub use regret::{
    greedy_weight, greedy_weight_bisection, potential, regret_vector, RmState, RmVariant,
    WeightSearch,
};

/// Two values closer than this are treated as tied by argmax.
pub const TIE_TOL: f64 = 1e-12;

/// Upper bound on any single dynamic weight.
pub const MAX_STEP_WEIGHT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub weight_used: f64,
    pub converged: bool,
}

pub trait Solver {
    fn kind(&self) -> SolverKind;

    /// Advances one iteration. Once converged, further calls are no-ops.
    fn step(&mut self, game: &Game) -> Result<StepOutcome>;

    /// Weighted average of all iterates so far. Errors before the first step.
    fn average_strategy(&self) -> Result<StrategyProfile>;

    /// Number of completed steps.
    fn iteration(&self) -> u64;

    fn cumulative_weight(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Fp,
    Rm,
    RmPlus,
    GreedyRm,
    Dwfp,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] =
        [SolverKind::Fp, SolverKind::Rm, SolverKind::RmPlus, SolverKind::GreedyRm, SolverKind::Dwfp];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Fp => "fp",
            SolverKind::Rm => "rm",
            SolverKind::RmPlus => "rm_plus",
            SolverKind::GreedyRm => "greedy_rm",
            SolverKind::Dwfp => "dwfp",
        }
    }

    /// Fresh solver state starting from the pure profile `initial`.
    pub fn build(self, game: &Game, initial: &[usize]) -> Result<Box<dyn Solver + Send>> {
        Ok(match self {
            SolverKind::Fp => Box::new(FpState::new(game, initial)?),
            SolverKind::Rm => Box::new(RmState::new(game, initial, RmVariant::Unit)?),
            SolverKind::RmPlus => Box::new(RmState::new(game, initial, RmVariant::Plus)?),
            SolverKind::GreedyRm => {
                Box::new(RmState::new(game, initial, RmVariant::Greedy(WeightSearch::Exact))?)
            }
            SolverKind::Dwfp => Box::new(DwfpState::new(game, initial)?),
        })
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownSolver(s.to_string()))
    }
}

/// Parses a comma-separated solver list such as `fp,rm_plus,dwfp`.
pub fn parse_solver_list(s: &str) -> Result<Vec<SolverKind>> {
    s.split(',').map(|t| t.trim().parse()).collect()
}

/// How σ₁ is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Init {
    /// Action 0 for every player.
    #[default]
    Zero,
    /// Uniformly random pure profile drawn from a seeded [`Prng`].
    Seeded(u64),
}

impl Init {
    pub fn profile(self, game: &Game) -> Vec<usize> {
        match self {
            Init::Zero => vec![0; game.num_players()],
            Init::Seeded(seed) => {
                let mut rng = Prng::new(seed);
                game.action_counts().iter().map(|&n| rng.below(n)).collect()
            }
        }
    }
}

/// Sorted iteration numbers at which a run records exploitability.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSchedule(Vec<u64>);

impl EvalSchedule {
    /// `points` geometrically spaced iterations from 1 to `max_iterations`,
    /// rounded and deduplicated.
    pub fn log_spaced(max_iterations: u64, points: usize) -> Self {
        let max = max_iterations.max(1);
        if points < 2 || max == 1 {
            return Self::from_iterations(vec![1, max]);
        }
        let ratio = (max as f64).ln() / (points - 1) as f64;
        let mut its: Vec<u64> = (0..points)
            .map(|k| ((ratio * k as f64).exp().round() as u64).clamp(1, max))
            .collect();
        its.dedup();
        *its.last_mut().unwrap() = max;
        Self(its)
    }

    /// Powers of 1.25 rounded to integers, deduplicated, plus `max_iterations`.
    pub fn geometric(max_iterations: u64) -> Self {
        let max = max_iterations.max(1);
        let points = ((max as f64).ln() / 1.25f64.ln()).ceil() as usize + 1;
        let mut its: Vec<u64> = (0..points)
            .map(|k| (1.25f64.powi(k as i32).round() as u64).min(max))
            .collect();
        its.push(max);
        its.dedup();
        Self(its)
    }

    pub fn from_iterations(mut its: Vec<u64>) -> Self {
        its.sort_unstable();
        its.dedup();
        Self(its)
    }

    pub fn iterations(&self) -> &[u64] {
        &self.0
    }

    pub fn contains(&self, iteration: u64) -> bool {
        self.0.binary_search(&iteration).is_ok()
    }
}

/// One evaluation record of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub solver: SolverKind,
    pub game_seed: u64,
    pub iteration: u64,
    pub cumulative_weight: f64,
    pub wall_time_ns: u64,
    pub exploitability: f64,
    pub eps_per_player: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub max_iterations: u64,
    pub max_weight: f64,
    pub schedule: EvalSchedule,
    pub init: Init,
    /// Copied into every [`TraceRow`].
    pub game_seed: u64,
}

impl RunOptions {
    pub fn new(max_iterations: u64, max_weight: f64, schedule: EvalSchedule) -> Self {
        Self { max_iterations, max_weight, schedule, init: Init::Zero, game_seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub rows: Vec<TraceRow>,
    pub converged: bool,
}

/// Steps a fresh solver until the iteration or weight budget runs out or it
/// converges, recording exploitability of σ̄ at every scheduled iteration and
/// at the end of the run.
pub fn run(kind: SolverKind, game: &Game, opts: &RunOptions) -> Result<RunResult> {
    if opts.max_iterations == 0 {
        return Err(Error::Config("iteration budget must be positive".into()));
    }
    if opts.max_weight.is_nan() || opts.max_weight <= 0.0 {
        return Err(Error::Config("weight budget must be positive".into()));
    }
    let mut solver = kind.build(game, &opts.init.profile(game))?;
    let mut rows = Vec::with_capacity(opts.schedule.iterations().len() + 1);
    let mut elapsed_ns: u64 = 0;
    let mut converged = false;

    let record = |solver: &dyn Solver, elapsed_ns: u64| -> Result<TraceRow> {
        let report = exploitability(game, &solver.average_strategy()?)?;
        Ok(TraceRow {
            solver: kind,
            game_seed: opts.game_seed,
            iteration: solver.iteration(),
            cumulative_weight: solver.cumulative_weight(),
            wall_time_ns: elapsed_ns,
            exploitability: report.mean,
            eps_per_player: report.per_player,
        })
    };

    while solver.iteration() < opts.max_iterations {
        let start = Instant::now();
        let outcome = solver.step(game)?;
        elapsed_ns += start.elapsed().as_nanos() as u64;
        if outcome.converged {
            converged = true;
            break;
        }
        if opts.schedule.contains(solver.iteration()) {
            rows.push(record(solver.as_ref(), elapsed_ns)?);
        }
        if solver.cumulative_weight() >= opts.max_weight {
            break;
        }
    }
    if rows.last().map(|r| r.iteration) != Some(solver.iteration()) && solver.iteration() > 0 {
        rows.push(record(solver.as_ref(), elapsed_ns)?);
    }
    Ok(RunResult { rows, converged })
}

// ---- shared numeric helpers ----

/// `target ← (1 − α)·target + α·source`
pub(crate) fn blend(target: &mut [f64], source: &[f64], alpha: f64) {
    for (t, s) in target.iter_mut().zip(source) {
        *t = (1.0 - alpha) * *t + alpha * s;
    }
}

/// Blends a distribution towards the unit vector of `action`.
pub(crate) fn blend_pure(target: &mut [f64], action: usize, alpha: f64) {
    for (a, t) in target.iter_mut().enumerate() {
        let s = if a == action { 1.0 } else { 0.0 };
        *t = (1.0 - alpha) * *t + alpha * s;
    }
}

/// Lowest index whose value is within [`TIE_TOL`] of the maximum.
pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values.iter().position(|&v| v >= max - TIE_TOL).unwrap_or(0)
}

pub(crate) fn profile_from_rows(rows: &[Vec<f64>]) -> Result<StrategyProfile> {
    rows.iter()
        .map(|r| MixedStrategy::new(r.clone()))
        .collect::<Result<Vec<_>>>()
        .map(StrategyProfile::new)
}

pub(crate) fn check_initial(game: &Game, initial: &[usize]) -> Result<()> {
    if initial.len() != game.num_players() {
        return Err(Error::Dimension(format!(
            "initial profile has {} actions for {} players",
            initial.len(),
            game.num_players()
        )));
    }
    if let Some((p, &a)) =
        initial.iter().enumerate().find(|&(p, &a)| a >= game.num_actions(p))
    {
        return Err(Error::Dimension(format!("initial action {a} out of range for player {p}")));
    }
    Ok(())
}
