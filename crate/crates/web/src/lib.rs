//! Browser bindings for the demo page in `www/`.
//!
//! Results cross the boundary as flat `Float64Array`s so the page needs no
//! serialization layer.

use eqsolve::game::Game;
use eqsolve::generator::random_zero_sum;
use eqsolve::harness::fit_loglog_slope;
use eqsolve::solvers::{run, EvalSchedule, RunOptions};
use eqsolve::{Result, SolverKind};
use wasm_bindgen::prelude::*;

/// Keeps a single call responsive in the browser.
pub const MAX_DEMO_ITERATIONS: u64 = 1_000_000;

fn budget(iters: u32) -> Result<u64> {
    let iters = u64::from(iters);
    if iters == 0 || iters > MAX_DEMO_ITERATIONS {
        return Err(eqsolve::Error::Config(format!(
            "iterations must be in 1..={MAX_DEMO_ITERATIONS}"
        )));
    }
    Ok(iters)
}

/// `[iteration, cumulative_weight, exploitability]` triples on a geometric schedule.
pub fn exploitability_trace(solver: &str, rows: usize, cols: usize, seed: u64, iters: u32) -> Result<Vec<f64>> {
    let kind: SolverKind = solver.parse()?;
    let game = random_zero_sum(rows, cols, seed)?;
    let iters = budget(iters)?;
    let opts = RunOptions { game_seed: seed, ..RunOptions::new(iters, f64::INFINITY, EvalSchedule::geometric(iters)) };
    let result = run(kind, &game, &opts)?;
    Ok(result
        .rows
        .iter()
        .flat_map(|r| [r.iteration as f64, r.cumulative_weight, r.exploitability])
        .collect())
}

/// `[slope, intercept, r_squared, points]` of log ε against log t.
pub fn convergence_slope(solver: &str, rows: usize, cols: usize, seed: u64, iters: u32) -> Result<Vec<f64>> {
    let kind: SolverKind = solver.parse()?;
    let game = random_zero_sum(rows, cols, seed)?;
    let iters = budget(iters)?;
    let opts = RunOptions { game_seed: seed, ..RunOptions::new(iters, f64::INFINITY, EvalSchedule::geometric(iters)) };
    let fit = fit_loglog_slope(&run(kind, &game, &opts)?.rows, 10.0, iters as f64)?;
    Ok(vec![fit.slope, fit.intercept, fit.r_squared, fit.points as f64])
}

/// Average-strategy path on a 2×2 zero-sum game given by the row player's
/// payoffs `[a00, a01, a10, a11]`. Returns `[p_row0, p_col0]` after every step.
pub fn average_path_2x2(solver: &str, row_payoffs: &[f64], steps: u32) -> Result<Vec<f64>> {
    let kind: SolverKind = solver.parse()?;
    let game = Game::zero_sum_matrix(2, 2, row_payoffs.to_vec())?;
    let steps = budget(steps)?;
    let mut s = kind.build(&game, &[0, 0])?;
    let mut out = Vec::with_capacity(2 * steps as usize);
    for _ in 0..steps {
        let outcome = s.step(&game)?;
        let avg = s.average_strategy()?;
        out.push(avg.strategy(0).probs()[0]);
        out.push(avg.strategy(1).probs()[0]);
        if outcome.converged {
            break;
        }
    }
    Ok(out)
}

fn js(e: eqsolve::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = exploitabilityTrace)]
pub fn exploitability_trace_js(solver: &str, rows: usize, cols: usize, seed: u32, iters: u32) -> std::result::Result<Vec<f64>, JsError> {
    exploitability_trace(solver, rows, cols, u64::from(seed), iters).map_err(js)
}

#[wasm_bindgen(js_name = convergenceSlope)]
pub fn convergence_slope_js(solver: &str, rows: usize, cols: usize, seed: u32, iters: u32) -> std::result::Result<Vec<f64>, JsError> {
    convergence_slope(solver, rows, cols, u64::from(seed), iters).map_err(js)
}

#[wasm_bindgen(js_name = averagePath2x2)]
pub fn average_path_2x2_js(solver: &str, row_payoffs: &[f64], steps: u32) -> std::result::Result<Vec<f64>, JsError> {
    average_path_2x2(solver, row_payoffs, steps).map_err(js)
}

#[wasm_bindgen(js_name = solverNames)]
pub fn solver_names() -> Vec<String> {
    SolverKind::ALL.iter().map(|k| k.name().to_string()).collect()
}
