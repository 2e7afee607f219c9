//! Reference computations and property checks shared by the integration tests.
//!
//! Nothing here calls into the library's metrics; exploitability is recomputed
//! from the raw payoff matrix.

#![allow(dead_code)]

use eqsolve::generator::random_zero_sum;
use eqsolve::solvers::{dwfp_gap, DwfpState, FpState, RmState, RmVariant, Solver, WeightSearch};
use eqsolve::{Game, StrategyProfile};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const SOLVER_VARIANTS: usize = 5;

/// Row-player payoff matrix of a two-player game.
pub fn row_matrix(game: &Game) -> Vec<Vec<f64>> {
    let (r, c) = (game.num_actions(0), game.num_actions(1));
    (0..r).map(|i| (0..c).map(|j| game.payoff(0, &[i, j])).collect()).collect()
}

pub fn col_matrix(game: &Game) -> Vec<Vec<f64>> {
    let (r, c) = (game.num_actions(0), game.num_actions(1));
    (0..r).map(|i| (0..c).map(|j| game.payoff(1, &[i, j])).collect()).collect()
}

/// Mean over both players of best-response value minus current value,
/// written out with explicit matrix products.
pub fn bimatrix_exploitability(a: &[Vec<f64>], b: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    let row_vals: Vec<f64> = a.iter().map(|row| row.iter().zip(y).map(|(p, q)| p * q).sum()).collect();
    let col_vals: Vec<f64> = (0..y.len())
        .map(|j| b.iter().zip(x).map(|(row, p)| row[j] * p).sum())
        .collect();
    let u0: f64 = row_vals.iter().zip(x).map(|(v, p)| v * p).sum();
    let u1: f64 = col_vals.iter().zip(y).map(|(v, q)| v * q).sum();
    let br0 = row_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let br1 = col_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    0.5 * ((br0 - u0) + (br1 - u1))
}

pub fn profile_exploitability(game: &Game, profile: &StrategyProfile) -> f64 {
    bimatrix_exploitability(
        &row_matrix(game),
        &col_matrix(game),
        profile.strategy(0).probs(),
        profile.strategy(1).probs(),
    )
}

/// Index `k` of [`SOLVER_VARIANTS`] as a fresh solver.
pub fn build_variant(k: usize, game: &Game, init: &[usize]) -> Box<dyn Solver> {
    match k {
        0 => Box::new(FpState::new(game, init).unwrap()),
        1 => Box::new(RmState::new(game, init, RmVariant::Unit).unwrap()),
        2 => Box::new(RmState::new(game, init, RmVariant::Plus).unwrap()),
        3 => Box::new(RmState::new(game, init, RmVariant::Greedy(WeightSearch::Exact)).unwrap()),
        _ => Box::new(DwfpState::new(game, init).unwrap()),
    }
}

/// A seeded random zero-sum game plus a pure starting profile inside it.
pub fn game_and_init() -> impl Strategy<Value = (Game, Vec<usize>)> {
    (1usize..7, 1usize..7, any::<u64>(), any::<u64>()).prop_map(|(r, c, seed, pick)| {
        let g = random_zero_sum(r, c, seed).unwrap();
        let init = vec![(pick % r as u64) as usize, ((pick >> 32) % c as u64) as usize];
        (g, init)
    })
}

pub fn check_simplex(game: &Game, init: &[usize], variant: usize, steps: usize) -> Result<(), TestCaseError> {
    let mut s = build_variant(variant, game, init);
    for _ in 0..steps {
        s.step(game).unwrap();
        let avg = s.average_strategy().unwrap();
        for strat in avg.strategies() {
            let sum: f64 = strat.probs().iter().sum();
            prop_assert!(strat.probs().iter().all(|&p| p >= 0.0), "negative probability");
            prop_assert!((sum - 1.0).abs() <= 1e-9, "sum {}", sum);
        }
    }
    Ok(())
}

pub fn check_rm_plus_nonnegative(game: &Game, init: &[usize], steps: usize) -> Result<(), TestCaseError> {
    let mut s = RmState::new(game, init, RmVariant::Plus).unwrap();
    for _ in 0..steps {
        s.rm_plus_step(game).unwrap();
        prop_assert!(s.rbar().iter().flatten().all(|&r| r >= 0.0));
    }
    Ok(())
}

pub fn check_gap_nonnegative(game: &Game, init: &[usize], steps: usize) -> Result<(), TestCaseError> {
    let mut s = DwfpState::new(game, init).unwrap();
    for _ in 0..steps {
        s.dwfp_step(game);
        let w = s.cumulative_weight();
        for q in s.qbar() {
            prop_assert!(dwfp_gap(q, w).iter().all(|&g| g >= 0.0));
        }
    }
    Ok(())
}

pub fn check_exploitability_nonnegative(game: &Game, x: &[f64], y: &[f64]) -> Result<(), TestCaseError> {
    let profile = StrategyProfile::from_probs(vec![normalize(x), normalize(y)]).unwrap();
    let lib = eqsolve::metrics::exploitability(game, &profile).unwrap();
    prop_assert!(lib.mean >= -1e-12);
    prop_assert!(lib.per_player.iter().all(|&e| e >= -1e-12));
    let reference = profile_exploitability(game, &profile);
    prop_assert!((lib.mean - reference).abs() <= 1e-10, "{} vs {}", lib.mean, reference);
    Ok(())
}

pub fn check_determinism(game: &Game, init: &[usize], variant: usize, steps: usize) -> Result<(), TestCaseError> {
    let mut a = build_variant(variant, game, init);
    let mut b = build_variant(variant, game, init);
    for _ in 0..steps {
        let oa = a.step(game).unwrap();
        let ob = b.step(game).unwrap();
        prop_assert_eq!(oa, ob);
    }
    prop_assert_eq!(a.average_strategy().unwrap(), b.average_strategy().unwrap());
    prop_assert_eq!(a.cumulative_weight().to_bits(), b.cumulative_weight().to_bits());
    Ok(())
}

/// Turns arbitrary nonnegative weights into a distribution; all-zero becomes
/// uniform.
pub fn normalize(w: &[f64]) -> Vec<f64> {
    let sum: f64 = w.iter().sum();
    if sum <= 0.0 {
        return vec![1.0 / w.len() as f64; w.len()];
    }
    w.iter().map(|x| x / sum).collect()
}

pub fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n)
}
