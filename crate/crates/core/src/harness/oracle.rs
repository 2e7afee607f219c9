//! Small-step fictitious play as a reference path for DW-FP.
//!
//! DW-FP claims to reproduce FP's trajectory parameterized by cumulative
//! weight. Running FP with a tiny fixed weight δ per step traces the same path
//! directly, so the two averages can be compared at equal W.

use crate::error::{Error, Result};
use crate::game::Game;
use crate::solvers::{DwfpState, Solver};

/// Average strategy (one probability row per player) at a cumulative weight.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePoint {
    pub weight: f64,
    pub avg: Vec<Vec<f64>>,
}

/// Fixed-weight FP: a first step of weight 1 from `initial`, then steps of
/// weight `delta` until `max_weight`. Records the average at every weight in
/// `checkpoints` (ascending, within `[1, max_weight]`).
pub fn small_step_fp_oracle(
    game: &Game,
    initial: &[usize],
    delta: f64,
    max_weight: f64,
    checkpoints: &[f64],
) -> Result<Vec<OraclePoint>> {
    if !(delta > 0.0 && delta <= 0.01) {
        return Err(Error::Config(format!("delta must lie in (0, 0.01], got {delta}")));
    }
    check_checkpoints(checkpoints, max_weight)?;
    let n = game.num_players();
    let mut current = initial.to_vec();
    let mut qbar: Vec<Vec<f64>> = (0..n).map(|p| game.pure_action_values(p, &current)).collect();
    let mut avg: Vec<Vec<f64>> = (0..n)
        .map(|p| (0..game.num_actions(p)).map(|a| if a == current[p] { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    let mut k: u64 = 0;
    loop {
        // W = 1 + kδ, computed directly so rounding does not accumulate.
        let w = 1.0 + k as f64 * delta;
        while let Some(&&c) = next.peek() {
            if c > w + delta * 0.5 {
                break;
            }
            out.push(OraclePoint { weight: c, avg: avg.clone() });
            next.next();
        }
        if next.peek().is_none() || w >= max_weight {
            break;
        }
        for p in 0..n {
            current[p] = first_max(&qbar[p]);
        }
        let alpha = delta / (w + delta);
        for p in 0..n {
            let v = game.pure_action_values(p, &current);
            for (q, x) in qbar[p].iter_mut().zip(v) {
                *q += alpha * (x - *q);
            }
            for (a, s) in avg[p].iter_mut().enumerate() {
                let target = if a == current[p] { 1.0 } else { 0.0 };
                *s += alpha * (target - *s);
            }
        }
        k += 1;
    }
    Ok(out)
}

fn first_max(values: &[f64]) -> usize {
    let mut best = 0;
    for (a, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = a;
        }
    }
    best
}

fn check_checkpoints(checkpoints: &[f64], max_weight: f64) -> Result<()> {
    if checkpoints.windows(2).any(|w| w[0] > w[1])
        || checkpoints.iter().any(|&c| !(1.0..=max_weight).contains(&c))
    {
        return Err(Error::Config("checkpoints must be ascending within [1, max_weight]".into()));
    }
    Ok(())
}

/// DW-FP's average strategy at the given cumulative weights, interpolated
/// inside the step that crosses each one.
pub fn dwfp_average_at_weights(
    game: &Game,
    initial: &[usize],
    checkpoints: &[f64],
) -> Result<Vec<OraclePoint>> {
    let max = checkpoints.last().copied().unwrap_or(1.0);
    check_checkpoints(checkpoints, max)?;
    let mut state = DwfpState::new(game, initial)?;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    while next.peek().is_some() {
        let w_prev = state.cumulative_weight();
        let avg_prev = state.avg().to_vec();
        let playing = state.current().to_vec();
        let outcome = state.dwfp_step(game);
        // after convergence the same pure profile is played forever
        let w_next = if outcome.converged { f64::INFINITY } else { state.cumulative_weight() };
        while let Some(&&c) = next.peek() {
            if c > w_next {
                break;
            }
            let avg = avg_prev
                .iter()
                .zip(&playing)
                .map(|(row, &a)| {
                    row.iter()
                        .enumerate()
                        .map(|(b, &s)| {
                            let pure = if a == b { 1.0 } else { 0.0 };
                            (w_prev * s + (c - w_prev) * pure) / c
                        })
                        .collect()
                })
                .collect();
            out.push(OraclePoint { weight: c, avg });
            next.next();
        }
    }
    Ok(out)
}

/// Largest ∞-norm difference between matched average strategies.
pub fn max_gap(a: &[OraclePoint], b: &[OraclePoint]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| {
            x.avg.iter().flatten().zip(y.avg.iter().flatten()).map(|(p, q)| (p - q).abs())
        })
        .fold(0.0, f64::max)
}
