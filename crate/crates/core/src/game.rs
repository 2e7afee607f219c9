//! Finite normal-form games and mixed-strategy payoff evaluation.
//!
//! Payoffs are dense per-player tensors stored row-major over pure-action
//! profiles, player 0 varying slowest. Two-player games take matrix fast paths
//! in [`action_values`]; the general contraction is kept for N players and as a
//! cross-check.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default cap on the number of players a [`Game`] may have.
pub const DEFAULT_MAX_PLAYERS: usize = 4;

/// Absolute tolerance of the zero-sum check.
pub const ZERO_SUM_TOL: f64 = 1e-12;

/// Absolute tolerance on the sum of a mixed strategy.
pub const PROB_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    action_counts: Vec<usize>,
    strides: Vec<usize>,
    payoffs: Vec<Vec<f64>>,
    zero_sum: bool,
}

impl Game {
    /// Builds and validates a game with the default player cap.
    pub fn new(
        num_players: usize,
        action_counts: Vec<usize>,
        payoffs: Vec<Vec<f64>>,
        zero_sum: bool,
    ) -> Result<Self> {
        Self::with_player_limit(num_players, action_counts, payoffs, zero_sum, DEFAULT_MAX_PLAYERS)
    }

    pub fn with_player_limit(
        num_players: usize,
        action_counts: Vec<usize>,
        payoffs: Vec<Vec<f64>>,
        zero_sum: bool,
        max_players: usize,
    ) -> Result<Self> {
        if num_players < 2 {
            return Err(Error::Dimension(format!("need at least 2 players, got {num_players}")));
        }
        if num_players > max_players {
            return Err(Error::Dimension(format!(
                "{num_players} players exceeds the limit of {max_players}"
            )));
        }
        if action_counts.len() != num_players {
            return Err(Error::Dimension(format!(
                "{} action counts for {num_players} players",
                action_counts.len()
            )));
        }
        if let Some(p) = action_counts.iter().position(|&n| n == 0) {
            return Err(Error::Dimension(format!("player {p} has no actions")));
        }
        if payoffs.len() != num_players {
            return Err(Error::Dimension(format!(
                "{} payoff tensors for {num_players} players",
                payoffs.len()
            )));
        }
        let size: usize = action_counts.iter().product();
        for (player, tensor) in payoffs.iter().enumerate() {
            if tensor.len() != size {
                return Err(Error::Dimension(format!(
                    "payoff tensor of player {player} has {} entries, expected {size}",
                    tensor.len()
                )));
            }
            if let Some(index) = tensor.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { player, index });
            }
        }
        if zero_sum {
            for index in 0..size {
                let sum: f64 = payoffs.iter().map(|t| t[index]).sum();
                if sum.abs() > ZERO_SUM_TOL {
                    return Err(Error::NotZeroSum { index, sum });
                }
            }
        }

        let mut strides = vec![1; num_players];
        for p in (0..num_players - 1).rev() {
            strides[p] = strides[p + 1] * action_counts[p + 1];
        }
        Ok(Self { action_counts, strides, payoffs, zero_sum })
    }

    /// Two-player game from explicit row-major matrices.
    pub fn bimatrix(
        rows: usize,
        cols: usize,
        row_payoffs: Vec<f64>,
        col_payoffs: Vec<f64>,
        zero_sum: bool,
    ) -> Result<Self> {
        Self::new(2, vec![rows, cols], vec![row_payoffs, col_payoffs], zero_sum)
    }

    /// Two-player zero-sum game; the column player's payoffs are the exact negation.
    pub fn zero_sum_matrix(rows: usize, cols: usize, row_payoffs: Vec<f64>) -> Result<Self> {
        let col_payoffs = row_payoffs.iter().map(|v| -v).collect();
        Self::bimatrix(rows, cols, row_payoffs, col_payoffs, true)
    }

    pub fn num_players(&self) -> usize {
        self.action_counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn num_actions(&self, player: usize) -> usize {
        self.action_counts[player]
    }

    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    /// Flat payoff tensor of one player.
    pub fn payoff_tensor(&self, player: usize) -> &[f64] {
        &self.payoffs[player]
    }

    /// Payoff of `player` at a pure-action profile.
    pub fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        self.payoffs[player][self.flat_index(actions)]
    }

    fn flat_index(&self, actions: &[usize]) -> usize {
        actions.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    /// Returns a copy with every payoff multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let payoffs = self
            .payoffs
            .iter()
            .map(|t| t.iter().map(|v| v * factor).collect())
            .collect();
        Self::with_player_limit(
            self.num_players(),
            self.action_counts.clone(),
            payoffs,
            self.zero_sum,
            usize::MAX,
        )
    }

    /// Payoffs of `player` for each of its actions against the pure actions
    /// of the others (`actions[player]` is ignored).
    pub fn pure_action_values(&self, player: usize, actions: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; self.action_counts[player]];
        self.pure_action_values_into(player, actions, &mut out);
        out
    }

    /// [`Game::pure_action_values`] written into `out`, which must have one
    /// slot per action of `player`.
    pub fn pure_action_values_into(&self, player: usize, actions: &[usize], out: &mut [f64]) {
        let mut base = 0;
        for (p, (&a, &s)) in actions.iter().zip(&self.strides).enumerate() {
            if p != player {
                base += a * s;
            }
        }
        let stride = self.strides[player];
        let tensor = &self.payoffs[player];
        for (a, v) in out.iter_mut().enumerate() {
            *v = tensor[base + a * stride];
        }
    }
}

/// A probability distribution over one player's actions.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    /// Validates and renormalizes `probs`. Entries must be finite and
    /// nonnegative, and sum to 1 within [`PROB_SUM_TOL`].
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidStrategy("empty probability vector".into()));
        }
        if let Some(v) = probs.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidStrategy(format!("entry {v} is not a probability")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidStrategy(format!("probabilities sum to {sum}")));
        }
        probs.iter_mut().for_each(|p| *p /= sum);
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub fn pure(n: usize, action: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[action] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

impl From<MixedStrategy> for Vec<f64> {
    fn from(s: MixedStrategy) -> Self {
        s.probs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    strategies: Vec<MixedStrategy>,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<MixedStrategy>) -> Self {
        Self { strategies }
    }

    pub fn uniform(game: &Game) -> Self {
        Self::new(game.action_counts().iter().map(|&n| MixedStrategy::uniform(n)).collect())
    }

    pub fn pure(game: &Game, actions: &[usize]) -> Self {
        Self::new(
            game.action_counts()
                .iter()
                .zip(actions)
                .map(|(&n, &a)| MixedStrategy::pure(n, a))
                .collect(),
        )
    }

    /// Builds a profile from raw probability vectors, validating each one.
    pub fn from_probs(probs: Vec<Vec<f64>>) -> Result<Self> {
        probs
            .into_iter()
            .map(MixedStrategy::new)
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn strategies(&self) -> &[MixedStrategy] {
        &self.strategies
    }

    pub fn strategy(&self, player: usize) -> &MixedStrategy {
        &self.strategies[player]
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    /// Checks that this profile has one strategy of the right length per player.
    pub fn check_shape(&self, game: &Game) -> Result<()> {
        if self.strategies.len() != game.num_players() {
            return Err(Error::Dimension(format!(
                "profile has {} strategies for {} players",
                self.strategies.len(),
                game.num_players()
            )));
        }
        for (p, (s, &n)) in self.strategies.iter().zip(game.action_counts()).enumerate() {
            if s.len() != n {
                return Err(Error::Dimension(format!(
                    "strategy of player {p} has {} entries, expected {n}",
                    s.len()
                )));
            }
        }
        Ok(())
    }
}

/// Calls `f(flat_index, actions)` for every pure-action profile in row-major order.
fn for_each_profile(counts: &[usize], mut f: impl FnMut(usize, &[usize])) {
    let mut actions = vec![0; counts.len()];
    let total: usize = counts.iter().product();
    for index in 0..total {
        f(index, &actions);
        for p in (0..counts.len()).rev() {
            actions[p] += 1;
            if actions[p] < counts[p] {
                break;
            }
            actions[p] = 0;
        }
    }
}

/// Expected payoff of `player` under a mixed profile (full tensor contraction).
pub fn expected_payoff(game: &Game, profile: &StrategyProfile, player: usize) -> Result<f64> {
    profile.check_shape(game)?;
    check_player(game, player)?;
    let tensor = game.payoff_tensor(player);
    let mut total = 0.0;
    for_each_profile(game.action_counts(), |index, actions| {
        let weight: f64 = actions
            .iter()
            .enumerate()
            .map(|(p, &a)| profile.strategy(p).probs()[a])
            .product();
        if weight != 0.0 {
            total += weight * tensor[index];
        }
    });
    Ok(total)
}

/// `u^player(a, σ^{-player})` for every action `a`; the player's own strategy
/// in `profile` is ignored.
pub fn action_values(game: &Game, player: usize, profile: &StrategyProfile) -> Result<Vec<f64>> {
    profile.check_shape(game)?;
    check_player(game, player)?;
    Ok(values_against(game, player, &probs_of(profile)))
}

/// General N-player version of [`action_values`], without matrix fast paths.
pub fn action_values_general(
    game: &Game,
    player: usize,
    profile: &StrategyProfile,
) -> Result<Vec<f64>> {
    profile.check_shape(game)?;
    check_player(game, player)?;
    Ok(contract_action_values(game, player, &probs_of(profile)))
}

fn probs_of(profile: &StrategyProfile) -> Vec<&[f64]> {
    profile.strategies().iter().map(MixedStrategy::probs).collect()
}

/// Unchecked action values against raw probability vectors, one per player.
pub(crate) fn values_against(game: &Game, player: usize, probs: &[&[f64]]) -> Vec<f64> {
    if game.num_players() != 2 {
        return contract_action_values(game, player, probs);
    }
    let cols = game.num_actions(1);
    let tensor = game.payoff_tensor(player);
    if player == 0 {
        let q = probs[1];
        tensor
            .chunks_exact(cols)
            .map(|row| row.iter().zip(q).map(|(u, p)| u * p).sum())
            .collect()
    } else {
        let p = probs[0];
        let mut values = vec![0.0; cols];
        for (row, &pr) in tensor.chunks_exact(cols).zip(p) {
            if pr == 0.0 {
                continue;
            }
            for (v, u) in values.iter_mut().zip(row) {
                *v += pr * u;
            }
        }
        values
    }
}

fn contract_action_values(game: &Game, player: usize, probs: &[&[f64]]) -> Vec<f64> {
    let tensor = game.payoff_tensor(player);
    let mut values = vec![0.0; game.num_actions(player)];
    for_each_profile(game.action_counts(), |index, actions| {
        let weight: f64 = actions
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != player)
            .map(|(p, &a)| probs[p][a])
            .product();
        if weight != 0.0 {
            values[actions[player]] += weight * tensor[index];
        }
    });
    values
}

fn check_player(game: &Game, player: usize) -> Result<()> {
    if player >= game.num_players() {
        return Err(Error::Dimension(format!(
            "player {player} out of range for a {}-player game",
            game.num_players()
        )));
    }
    Ok(())
}

// Text format:
//
//   players n_1 .. n_N zero_sum
//
//   <player 0 payoffs, one line per last-axis run>
//
//   <player 1 payoffs>
//   ...
//
// For two players the header reads `2 rows cols zero_sum` and each block is the
// row-major payoff matrix. Entries use 17 significant digits so the file
// round-trips exactly.

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut header = self.num_players().to_string();
        for n in &self.action_counts {
            write!(header, " {n}")?;
        }
        writeln!(f, "{header} {}", u8::from(self.zero_sum))?;
        let line_len = *self.action_counts.last().unwrap_or(&1);
        for tensor in &self.payoffs {
            writeln!(f)?;
            for line in tensor.chunks(line_len) {
                let entries: Vec<String> = line.iter().map(|v| format!("{:.16e}", v + 0.0)).collect();
                writeln!(f, "{}", entries.join(" "))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Game {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim_start().starts_with('#'));
        let header = lines
            .by_ref()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Parse("empty game file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let num_players: usize = parse_field(fields.first(), "player count")?;
        if fields.len() != num_players + 2 {
            return Err(Error::Parse(format!(
                "header `{header}` should hold the player count, {num_players} action counts and the zero-sum flag"
            )));
        }
        let action_counts = fields[1..=num_players]
            .iter()
            .map(|f| parse_field(Some(f), "action count"))
            .collect::<Result<Vec<usize>>>()?;
        let zero_sum = match fields[num_players + 1] {
            "1" | "true" => true,
            "0" | "false" => false,
            other => return Err(Error::Parse(format!("bad zero-sum flag `{other}`"))),
        };

        let mut blocks: Vec<Vec<f64>> = Vec::new();
        let mut in_block = false;
        for line in lines {
            if line.trim().is_empty() {
                in_block = false;
                continue;
            }
            if !in_block {
                blocks.push(Vec::new());
                in_block = true;
            }
            let block = blocks.last_mut().expect("block was just pushed");
            for token in line.split_whitespace() {
                block.push(
                    token.parse().map_err(|_| Error::Parse(format!("bad payoff `{token}`")))?,
                );
            }
        }
        Game::new(num_players, action_counts, blocks, zero_sum)
    }
}

fn parse_field<T: FromStr>(field: Option<&&str>, what: &str) -> Result<T> {
    field
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| Error::Parse(format!("missing or invalid {what} in header")))
}
