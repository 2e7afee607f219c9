//! Regret matching family: unit-weight RM, RM+, and Greedy RM.
//!
//! Greedy RM picks each iterate's weight to minimize the potential
//! Φ(R̄) = Σ_a R̄⁺(a) of the blended average regret. Along the blend
//! `(1 − α)·R̄ + α·r`, Φ is convex and piecewise linear in α, so the exact
//! minimizer is found by walking the breakpoints where a component changes sign.

use super::{blend, check_initial, profile_from_rows, Solver, SolverKind, StepOutcome};
use super::MAX_STEP_WEIGHT;
use crate::error::{Error, Result};
use crate::game::{values_against, Game, StrategyProfile};

/// `u(a, σ^{-i}) − u(σ)` for each action of `player`.
pub fn regret_vector(game: &Game, player: usize, profile: &StrategyProfile) -> Result<Vec<f64>> {
    let values = crate::game::action_values(game, player, profile)?;
    Ok(regrets_from_values(values, profile.strategy(player).probs()))
}

fn regrets_from_values(mut values: Vec<f64>, own: &[f64]) -> Vec<f64> {
    let current: f64 = values.iter().zip(own).map(|(v, p)| v * p).sum();
    values.iter_mut().for_each(|v| *v -= current);
    values
}

/// Sum of positive parts over every player and action.
pub fn potential<V: AsRef<[f64]>>(rbar_per_player: &[V]) -> f64 {
    rbar_per_player.iter().map(|r| positive_sum(r.as_ref())).sum()
}

fn positive_sum(r: &[f64]) -> f64 {
    r.iter().map(|v| v.max(0.0)).sum()
}

/// How the Greedy RM weight subproblem is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightSearch {
    /// Exact breakpoint scan.
    #[default]
    Exact,
    /// 256 bisection steps on α.
    Bisection,
}

/// Slope of Φ just to the right of `alpha` for the blend `a + b·α`.
fn right_slope(a: &[f64], b: &[f64], alpha: f64) -> f64 {
    let mut slope = 0.0;
    for (&ak, &bk) in a.iter().zip(b) {
        let active = if bk > 0.0 {
            alpha >= -ak / bk
        } else if bk < 0.0 {
            alpha < -ak / bk
        } else {
            false
        };
        if active {
            slope += bk;
        }
    }
    slope
}

fn weight_for_alpha(alpha: f64, w_prev: f64) -> f64 {
    if alpha >= 1.0 {
        return MAX_STEP_WEIGHT;
    }
    (w_prev * alpha / (1.0 - alpha)).min(MAX_STEP_WEIGHT)
}

fn check_lengths(rbar_prev: &[f64], r_new: &[f64]) -> Result<()> {
    if rbar_prev.len() != r_new.len() {
        return Err(Error::Dimension(format!(
            "regret vectors of length {} and {}",
            rbar_prev.len(),
            r_new.len()
        )));
    }
    Ok(())
}

/// Weight `w` minimizing `Φ(W/(W+w)·rbar_prev + w/(W+w)·r_new)` over
/// `w ≥ min_weight`, returning the smallest minimizer on plateaus.
///
/// Returns 1 when `w_prev` is 0 (the blend does not depend on `w`), and
/// [`MAX_STEP_WEIGHT`] when the optimum needs the previous average discarded.
pub fn greedy_weight(rbar_prev: &[f64], r_new: &[f64], w_prev: f64, min_weight: f64) -> Result<f64> {
    check_lengths(rbar_prev, r_new)?;
    if w_prev <= 0.0 {
        return Ok(1.0);
    }
    let min_weight = min_weight.clamp(0.0, MAX_STEP_WEIGHT);
    let lo = min_weight / (w_prev + min_weight);
    let b: Vec<f64> = r_new.iter().zip(rbar_prev).map(|(r, a)| r - a).collect();

    let mut candidates: Vec<f64> = rbar_prev
        .iter()
        .zip(&b)
        .filter(|&(_, &bk)| bk != 0.0)
        .map(|(&ak, &bk)| -ak / bk)
        .filter(|&x| x > lo && x < 1.0)
        .collect();
    candidates.push(lo);
    candidates.sort_by(f64::total_cmp);

    // Φ is convex, so the leftmost point with a nonnegative right slope is
    // the smallest minimizer.
    for &alpha in &candidates {
        if right_slope(rbar_prev, &b, alpha) >= 0.0 {
            return Ok(weight_for_alpha(alpha, w_prev).max(min_weight));
        }
    }
    Ok(MAX_STEP_WEIGHT)
}

/// [`greedy_weight`] solved by bisection on α instead of the breakpoint scan.
pub fn greedy_weight_bisection(
    rbar_prev: &[f64],
    r_new: &[f64],
    w_prev: f64,
    min_weight: f64,
) -> Result<f64> {
    check_lengths(rbar_prev, r_new)?;
    if w_prev <= 0.0 {
        return Ok(1.0);
    }
    let min_weight = min_weight.clamp(0.0, MAX_STEP_WEIGHT);
    let b: Vec<f64> = r_new.iter().zip(rbar_prev).map(|(r, a)| r - a).collect();
    let mut lo = min_weight / (w_prev + min_weight);
    if right_slope(rbar_prev, &b, lo) >= 0.0 {
        return Ok(weight_for_alpha(lo, w_prev).max(min_weight));
    }
    let mut hi = 1.0;
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if right_slope(rbar_prev, &b, mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(weight_for_alpha(hi, w_prev).max(min_weight))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmVariant {
    /// Original regret matching, unit weight per iterate.
    Unit,
    /// Cumulative regrets clipped at zero, linearly weighted average strategy.
    Plus,
    /// Potential-minimizing dynamic weights.
    Greedy(WeightSearch),
}

#[derive(Debug, Clone)]
pub struct RmState {
    variant: RmVariant,
    /// Averaged regret for `Unit`/`Greedy`, clipped cumulative regret for `Plus`.
    rbar: Vec<Vec<f64>>,
    current: Vec<Vec<f64>>,
    avg: Vec<Vec<f64>>,
    cumulative_weight: Vec<f64>,
    /// Sum of the linear averaging weights (RM+ only).
    avg_weight: f64,
    t: u64,
}

impl RmState {
    pub fn new(game: &Game, initial: &[usize], variant: RmVariant) -> Result<Self> {
        check_initial(game, initial)?;
        let counts = game.action_counts();
        let current = counts
            .iter()
            .zip(initial)
            .map(|(&n, &a)| {
                let mut s = vec![0.0; n];
                s[a] = 1.0;
                s
            })
            .collect();
        Ok(Self {
            variant,
            rbar: counts.iter().map(|&n| vec![0.0; n]).collect(),
            current,
            avg: counts.iter().map(|&n| vec![0.0; n]).collect(),
            cumulative_weight: vec![0.0; counts.len()],
            avg_weight: 0.0,
            t: 0,
        })
    }

    pub fn variant(&self) -> RmVariant {
        self.variant
    }

    pub fn rbar(&self) -> &[Vec<f64>] {
        &self.rbar
    }

    pub fn current(&self) -> &[Vec<f64>] {
        &self.current
    }

    pub fn avg(&self) -> &[Vec<f64>] {
        &self.avg
    }

    pub fn player_weights(&self) -> &[f64] {
        &self.cumulative_weight
    }

    fn instant_regrets(&self, game: &Game) -> Vec<Vec<f64>> {
        let probs: Vec<&[f64]> = self.current.iter().map(Vec::as_slice).collect();
        (0..game.num_players())
            .map(|p| regrets_from_values(values_against(game, p, &probs), &self.current[p]))
            .collect()
    }

    /// Regret-matching update with iterate weights from `weight_of(player, r̄, r, W)`.
    fn weighted_step(
        &mut self,
        game: &Game,
        weight_of: impl Fn(&[f64], &[f64], f64, f64) -> Result<f64>,
    ) -> Result<StepOutcome> {
        let regrets = self.instant_regrets(game);
        let mut total = 0.0;
        for (p, r) in regrets.iter().enumerate() {
            let w_prev = self.cumulative_weight[p];
            let mean_weight = if self.t == 0 { 0.0 } else { w_prev / self.t as f64 };
            let w = weight_of(&self.rbar[p], r, w_prev, mean_weight)?;
            let alpha = w / (w_prev + w);
            blend(&mut self.rbar[p], r, alpha);
            blend(&mut self.avg[p], &self.current[p], alpha);
            self.cumulative_weight[p] = w_prev + w;
            total += w;
        }
        self.t += 1;
        for p in 0..game.num_players() {
            self.current[p] = match_regrets(&self.rbar[p]);
        }
        Ok(StepOutcome { weight_used: total / regrets.len() as f64, converged: false })
    }

    pub fn rm_step(&mut self, game: &Game) -> Result<StepOutcome> {
        self.weighted_step(game, |_, _, _, _| Ok(1.0))
    }

    pub fn greedy_rm_step(&mut self, game: &Game, search: WeightSearch) -> Result<StepOutcome> {
        match search {
            WeightSearch::Exact => self.weighted_step(game, greedy_weight),
            WeightSearch::Bisection => self.weighted_step(game, greedy_weight_bisection),
        }
    }

    pub fn rm_plus_step(&mut self, game: &Game) -> Result<StepOutcome> {
        let regrets = self.instant_regrets(game);
        self.t += 1;
        self.avg_weight += self.t as f64;
        let alpha = self.t as f64 / self.avg_weight;
        for (p, r) in regrets.iter().enumerate() {
            for (acc, x) in self.rbar[p].iter_mut().zip(r) {
                *acc = (*acc + x).max(0.0);
            }
            blend(&mut self.avg[p], &self.current[p], alpha);
            self.cumulative_weight[p] += 1.0;
        }
        for p in 0..game.num_players() {
            self.current[p] = match_regrets(&self.rbar[p]);
        }
        Ok(StepOutcome { weight_used: 1.0, converged: false })
    }
}

/// Strategy proportional to positive regrets, uniform if none are positive.
pub(crate) fn match_regrets(rbar: &[f64]) -> Vec<f64> {
    let total = positive_sum(rbar);
    if total > 0.0 {
        rbar.iter().map(|v| v.max(0.0) / total).collect()
    } else {
        vec![1.0 / rbar.len() as f64; rbar.len()]
    }
}

impl Solver for RmState {
    fn kind(&self) -> SolverKind {
        match self.variant {
            RmVariant::Unit => SolverKind::Rm,
            RmVariant::Plus => SolverKind::RmPlus,
            RmVariant::Greedy(_) => SolverKind::GreedyRm,
        }
    }

    fn step(&mut self, game: &Game) -> Result<StepOutcome> {
        match self.variant {
            RmVariant::Unit => self.rm_step(game),
            RmVariant::Plus => self.rm_plus_step(game),
            RmVariant::Greedy(search) => self.greedy_rm_step(game, search),
        }
    }

    fn average_strategy(&self) -> Result<StrategyProfile> {
        if self.t == 0 {
            return Err(Error::NoIterations);
        }
        profile_from_rows(&self.avg)
    }

    fn iteration(&self) -> u64 {
        self.t
    }

    /// Mean of the per-player cumulative weights.
    fn cumulative_weight(&self) -> f64 {
        self.cumulative_weight.iter().sum::<f64>() / self.cumulative_weight.len() as f64
    }
}
