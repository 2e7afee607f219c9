//! Best responses and exploitability.

use crate::error::Result;
use crate::game::{action_values, expected_payoff, Game, StrategyProfile};

/// Per-player exploitability and its mean over players.
#[derive(Debug, Clone, PartialEq)]
pub struct ExploitabilityReport {
    pub per_player: Vec<f64>,
    pub mean: f64,
}

/// Index of the first maximal entry and the maximum itself.
pub(crate) fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = 0;
    for (a, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = a;
        }
    }
    (best, values[best])
}

/// A payoff-maximizing pure action of `player` against `profile`, lowest index on ties.
pub fn best_response(game: &Game, player: usize, profile: &StrategyProfile) -> Result<(usize, f64)> {
    Ok(argmax(&action_values(game, player, profile)?))
}

/// Best-response value minus current expected payoff for one player.
pub fn player_exploitability(game: &Game, player: usize, profile: &StrategyProfile) -> Result<f64> {
    let values = action_values(game, player, profile)?;
    let (_, best) = argmax(&values);
    let current: f64 = values
        .iter()
        .zip(profile.strategy(player).probs())
        .map(|(v, p)| v * p)
        .sum();
    Ok(best - current)
}

pub fn exploitability(game: &Game, profile: &StrategyProfile) -> Result<ExploitabilityReport> {
    let per_player = (0..game.num_players())
        .map(|p| player_exploitability(game, p, profile))
        .collect::<Result<Vec<_>>>()?;
    let mean = per_player.iter().sum::<f64>() / per_player.len() as f64;
    Ok(ExploitabilityReport { per_player, mean })
}

/// Same as [`player_exploitability`] but through the full payoff contraction.
/// Slower; kept as an independent route for tests.
pub fn player_exploitability_contracted(
    game: &Game,
    player: usize,
    profile: &StrategyProfile,
) -> Result<f64> {
    let (_, best) = best_response(game, player, profile)?;
    Ok(best - expected_payoff(game, profile, player)?)
}
