//! Self-checks runnable from the command line: reference-path equivalences
//! and invariants on seeded random games.

use crate::error::Result;
use crate::game::{Game, StrategyProfile};
use crate::generator::{named_game, random_zero_sum, Prng};
use crate::metrics::exploitability;
use crate::solvers::{
    dwfp_gap, greedy_weight, greedy_weight_bisection, potential, run, DwfpState, EvalSchedule,
    FpState, Init, RmState, RmVariant, RunOptions, Solver, SolverKind,
};

use super::config::ExperimentConfig;
use super::experiment::run_sweep;
use super::oracle::{dwfp_average_at_weights, max_gap, small_step_fp_oracle};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Budget {
    games: u64,
    steps: u64,
    oracle_weight: f64,
}

/// Runs every check. `quick` shrinks the budgets to a few seconds.
pub fn verify_suite(quick: bool, oracle_delta: f64) -> Result<Vec<CheckResult>> {
    let b = if quick {
        Budget { games: 2, steps: 200, oracle_weight: 20.0 }
    } else {
        Budget { games: 5, steps: 1000, oracle_weight: 100.0 }
    };
    Ok(vec![
        fixtures()?,
        unit_weight_equivalence(&b)?,
        small_step_oracle(&b, oracle_delta)?,
        greedy_search_agreement(&b)?,
        trajectory_invariants(&b)?,
        pure_equilibrium_termination()?,
        sweep_determinism()?,
    ])
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name, passed, detail }
}

fn fixtures() -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for name in ["matching_pennies", "rps"] {
        let g = named_game(name)?;
        worst = worst.max(exploitability(&g, &StrategyProfile::uniform(&g))?.mean);
    }
    Ok(check("uniform fixtures are equilibria", worst <= 1e-12, format!("max eps {worst:.3e}")))
}

fn unit_weight_equivalence(b: &Budget) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for seed in 0..b.games {
        let g = random_zero_sum(5, 5, seed)?;
        let init = Init::Seeded(seed).profile(&g);
        let mut fp = FpState::new(&g, &init)?;
        let mut dw = DwfpState::new(&g, &init)?.with_fixed_weight(1.0);
        for _ in 0..b.steps {
            fp.fp_step(&g);
            dw.dwfp_step(&g);
            worst = worst.max(max_abs_diff(fp.qbar(), dw.qbar()));
            worst = worst.max(max_abs_diff(fp.avg(), dw.avg()));
        }
    }
    Ok(check("unit-weight DW-FP matches FP", worst <= 1e-12, format!("max diff {worst:.3e}")))
}

/// Compares DW-FP with δ-FP and with (δ/4)-FP. DW-FP should sit on the
/// δ → 0 limit, so the finer oracle must be within 1e-2 and no farther away.
fn small_step_oracle(b: &Budget, delta: f64) -> Result<CheckResult> {
    let marks: Vec<f64> = (1..=b.oracle_weight as u64).map(|w| w as f64).collect();
    let (mut coarse, mut fine): (f64, f64) = (0.0, 0.0);
    for seed in 0..b.games {
        let g = random_zero_sum(5, 5, seed)?;
        let init = Init::Seeded(seed).profile(&g);
        let dw = dwfp_average_at_weights(&g, &init, &marks)?;
        let fp = small_step_fp_oracle(&g, &init, delta, b.oracle_weight, &marks)?;
        let fp_fine = small_step_fp_oracle(&g, &init, delta / 4.0, b.oracle_weight, &marks)?;
        coarse = coarse.max(max_gap(&dw, &fp));
        fine = fine.max(max_gap(&dw, &fp_fine));
    }
    Ok(check(
        "DW-FP follows small-step FP",
        fine <= 1e-2 && fine <= coarse,
        format!(
            "max gap {coarse:.3e} at delta={delta:e}, {fine:.3e} at delta={:e}, up to W={}",
            delta / 4.0,
            b.oracle_weight
        ),
    ))
}

fn greedy_search_agreement(b: &Budget) -> Result<CheckResult> {
    let mut rng = Prng::new(99);
    let mut worst: f64 = 0.0;
    for _ in 0..b.steps {
        let n = 2 + rng.below(6);
        let rbar: Vec<f64> = (0..n).map(|_| rng.gaussian()).collect();
        let r: Vec<f64> = (0..n).map(|_| 2.0 * rng.gaussian()).collect();
        let w_prev = 1.0 + 10.0 * rng.next_uniform();
        let floor = w_prev * rng.next_uniform() * 0.5;
        let exact = greedy_weight(&rbar, &r, w_prev, floor)?;
        let bisect = greedy_weight_bisection(&rbar, &r, w_prev, floor)?;
        let phi = |w: f64| {
            let blended: Vec<f64> =
                rbar.iter().zip(&r).map(|(a, b)| (w_prev * a + w * b) / (w_prev + w)).collect();
            potential(&[blended])
        };
        worst = worst.max(phi(exact) - phi(bisect));
    }
    Ok(check(
        "exact greedy weight is no worse than bisection",
        worst <= 1e-9,
        format!("max excess potential {worst:.3e}"),
    ))
}

fn trajectory_invariants(b: &Budget) -> Result<CheckResult> {
    let mut failures = Vec::new();
    for seed in 0..b.games {
        let g = random_zero_sum(6, 4, 100 + seed)?;
        let init = Init::Seeded(seed).profile(&g);
        let mut solvers: Vec<Box<dyn Solver>> = vec![
            Box::new(FpState::new(&g, &init)?),
            Box::new(RmState::new(&g, &init, RmVariant::Unit)?),
            Box::new(RmState::new(&g, &init, RmVariant::Greedy(Default::default()))?),
            Box::new(DwfpState::new(&g, &init)?),
        ];
        let mut plus = RmState::new(&g, &init, RmVariant::Plus)?;
        let mut dw = DwfpState::new(&g, &init)?;
        for _ in 0..b.steps {
            for s in solvers.iter_mut() {
                s.step(&g)?;
                if let Some(msg) = average_problem(&g, s.as_ref())? {
                    failures.push(format!("{} seed {seed}: {msg}", s.kind()));
                }
            }
            plus.step(&g)?;
            if plus.rbar().iter().flatten().any(|&r| r < 0.0) {
                failures.push(format!("rm_plus seed {seed}: negative regret"));
            }
            dw.step(&g)?;
            let w = dw.cumulative_weight();
            if dw.qbar().iter().flat_map(|q| dwfp_gap(q, w)).any(|x| x < 0.0) {
                failures.push(format!("dwfp seed {seed}: negative gap"));
            }
        }
    }
    failures.truncate(5);
    let passed = failures.is_empty();
    let detail = if passed {
        "simplex, nonnegative eps, RM+ regrets and DW-FP gaps hold".to_string()
    } else {
        failures.join("; ")
    };
    Ok(check("trajectory invariants", passed, detail))
}

fn average_problem(game: &Game, solver: &dyn Solver) -> Result<Option<String>> {
    let avg = solver.average_strategy()?;
    for s in avg.strategies() {
        let sum: f64 = s.probs().iter().sum();
        if s.probs().iter().any(|&p| p < 0.0) || (sum - 1.0).abs() > 1e-9 {
            return Ok(Some(format!("average left the simplex (sum {sum})")));
        }
    }
    let eps = exploitability(game, &avg)?.mean;
    Ok((eps < -1e-9).then(|| format!("negative exploitability {eps}")))
}

fn pure_equilibrium_termination() -> Result<CheckResult> {
    let g = named_game("saddle_2x2")?;
    let opts = RunOptions::new(1000, f64::INFINITY, EvalSchedule::geometric(1000));
    let result = run(SolverKind::Dwfp, &g, &opts)?;
    let last = result.rows.last().map(|r| (r.iteration, r.exploitability));
    let passed = result.converged && matches!(last, Some((it, e)) if it < 1000 && e <= 1e-9);
    Ok(check("DW-FP stops at a pure equilibrium", passed, format!("final row {last:?}")))
}

fn sweep_determinism() -> Result<CheckResult> {
    let config = ExperimentConfig {
        rows: 4,
        cols: 4,
        num_games: 3,
        max_iterations: 300,
        eval_points: Some(8),
        ..Default::default()
    };
    let strip = |mut rows: Vec<crate::solvers::TraceRow>| {
        rows.iter_mut().for_each(|r| r.wall_time_ns = 0);
        rows
    };
    let a = strip(run_sweep(&config)?);
    let b = strip(run_sweep(&config)?);
    Ok(check("sweeps are deterministic", a == b, format!("{} rows compared", a.len())))
}

fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
