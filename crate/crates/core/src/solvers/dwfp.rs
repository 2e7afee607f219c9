//! Dynamically weighted fictitious play.
//!
//! Between two switches of any player's Q̄-argmax, FP plays the same pure
//! profile over and over. Every player discloses its current action, so the
//! number of FP iterations until the first argmax switch is computable in
//! closed form: the cumulative deficit `W·(max Q̄ − Q̄(a))` of an action closes
//! at rate `u(a, σ^{-i}) − u(σ)` per unit weight. DW-FP applies that many
//! iterations in a single weighted update.

use super::{argmax_lowest, blend, blend_pure, check_initial, profile_from_rows};
use super::{Solver, SolverKind, StepOutcome, MAX_STEP_WEIGHT, TIE_TOL};
use crate::error::{Error, Result};
use crate::game::{Game, StrategyProfile};

/// `W · (max Q̄ − Q̄(a))` per action.
pub fn dwfp_gap(qbar: &[f64], weight: f64) -> Vec<f64> {
    let max = qbar.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    qbar.iter().map(|q| weight * (max - q)).collect()
}

/// Rate at which each action gains on the current payoff: `u(a, σ^{-i}) − u(σ)`.
pub fn dwfp_speed(game: &Game, player: usize, profile: &StrategyProfile) -> Result<Vec<f64>> {
    super::regret_vector(game, player, profile)
}

/// Global catch-up weight `min_i min_a gap/speed` over actions with positive
/// speed. Returns `(∞, true)` when no action can ever overtake.
pub fn dwfp_weight<G, S>(gaps: &[G], speeds: &[S]) -> (f64, bool)
where
    G: AsRef<[f64]>,
    S: AsRef<[f64]>,
{
    let mut w = f64::INFINITY;
    for (gap, speed) in gaps.iter().zip(speeds) {
        for (&g, &s) in gap.as_ref().iter().zip(speed.as_ref()) {
            if s > 0.0 {
                w = w.min(g / s);
            }
        }
    }
    (w, w == f64::INFINITY)
}

#[derive(Debug, Clone)]
pub struct DwfpState {
    qbar: Vec<Vec<f64>>,
    current: Vec<usize>,
    avg: Vec<Vec<f64>>,
    weight: f64,
    t: u64,
    converged: bool,
    fixed_weight: Option<f64>,
    /// Scratch: pure action values against the current profile.
    values: Vec<Vec<f64>>,
}

impl DwfpState {
    pub fn new(game: &Game, initial: &[usize]) -> Result<Self> {
        check_initial(game, initial)?;
        let zeros = |n: &usize| vec![0.0; *n];
        Ok(Self {
            qbar: game.action_counts().iter().map(zeros).collect(),
            current: initial.to_vec(),
            avg: game.action_counts().iter().map(zeros).collect(),
            weight: 0.0,
            t: 0,
            converged: false,
            fixed_weight: None,
            values: game.action_counts().iter().map(zeros).collect(),
        })
    }

    /// Test hook: uses `w` for every step instead of the catch-up weight, and
    /// FP's lowest-index argmax. With `w = 1` the trajectory is plain FP.
    pub fn with_fixed_weight(mut self, w: f64) -> Self {
        self.fixed_weight = Some(w);
        self
    }

    pub fn qbar(&self) -> &[Vec<f64>] {
        &self.qbar
    }

    pub fn current(&self) -> &[usize] {
        &self.current
    }

    pub fn avg(&self) -> &[Vec<f64>] {
        &self.avg
    }

    pub fn is_converged(&self) -> bool {
        self.converged
    }

    pub fn dwfp_step(&mut self, game: &Game) -> StepOutcome {
        if self.converged {
            return StepOutcome { weight_used: 0.0, converged: true };
        }
        let n = game.num_players();
        for p in 0..n {
            game.pure_action_values_into(p, &self.current, &mut self.values[p]);
        }

        let w = match self.fixed_weight {
            Some(w) => w,
            None if self.weight == 0.0 => 1.0,
            None => {
                let w = self.catch_up_weight();
                if w == f64::INFINITY {
                    return self.settle();
                }
                w
            }
        };
        let w = w.min(MAX_STEP_WEIGHT);

        let alpha = w / (self.weight + w);
        for p in 0..n {
            blend(&mut self.qbar[p], &self.values[p], alpha);
            blend_pure(&mut self.avg[p], self.current[p], alpha);
        }
        self.weight += w;
        self.t += 1;
        for p in 0..n {
            self.current[p] = if self.fixed_weight.is_some() {
                argmax_lowest(&self.qbar[p])
            } else {
                argmax_by_instant(&self.qbar[p], &self.values[p])
            };
        }
        StepOutcome { weight_used: w, converged: false }
    }

    /// [`dwfp_weight`] of the current gaps and speeds, without materializing
    /// either.
    fn catch_up_weight(&self) -> f64 {
        let mut w = f64::INFINITY;
        for ((q, v), &a) in self.qbar.iter().zip(&self.values).zip(&self.current) {
            let max = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for (&qa, &va) in q.iter().zip(v) {
                let speed = va - v[a];
                if speed > 0.0 {
                    w = w.min(self.weight * (max - qa) / speed);
                }
            }
        }
        w
    }

    /// The current pure profile is an equilibrium and would be played with
    /// unbounded weight, so the averages jump to their limit.
    fn settle(&mut self) -> StepOutcome {
        for (p, v) in self.values.iter().enumerate() {
            self.qbar[p].copy_from_slice(v);
            blend_pure(&mut self.avg[p], self.current[p], 1.0);
        }
        self.converged = true;
        self.t += 1;
        StepOutcome { weight_used: 0.0, converged: true }
    }
}

/// Argmax of `qbar`; near-ties go to the larger instantaneous value, then the
/// lower index.
fn argmax_by_instant(qbar: &[f64], instant: &[f64]) -> usize {
    let max = qbar.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<usize> = None;
    for (a, &q) in qbar.iter().enumerate() {
        if q < max - TIE_TOL {
            continue;
        }
        match best {
            Some(b) if instant[a] <= instant[b] => {}
            _ => best = Some(a),
        }
    }
    best.unwrap_or(0)
}

impl Solver for DwfpState {
    fn kind(&self) -> SolverKind {
        SolverKind::Dwfp
    }

    fn step(&mut self, game: &Game) -> Result<StepOutcome> {
        Ok(self.dwfp_step(game))
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

    fn cumulative_weight(&self) -> f64 {
        self.weight
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{named_game, random_zero_sum, SADDLE_2X2_EQUILIBRIUM};
    use crate::metrics::exploitability;
    use crate::solvers::{regret_vector, FpState};

    #[test]
    fn gap_examples() {
        assert_eq!(dwfp_gap(&[1.0, -1.0], 1.0), vec![0.0, 2.0]);
        assert_eq!(dwfp_gap(&[0.3, -7.0, 2.0], 0.0), vec![0.0; 3]);
        assert_eq!(dwfp_gap(&[0.4; 4], 3.0), vec![0.0; 4]);
    }

    #[test]
    fn speed_examples() {
        let mp = named_game("matching_pennies").unwrap();
        let ht = StrategyProfile::pure(&mp, &[0, 1]);
        assert_eq!(dwfp_speed(&mp, 0, &ht).unwrap(), vec![0.0, 2.0]);
        assert_eq!(dwfp_speed(&mp, 1, &ht).unwrap(), regret_vector(&mp, 1, &ht).unwrap());

        let g = random_zero_sum(4, 4, 2).unwrap();
        let profile = StrategyProfile::pure(&g, &[1, 3]);
        // make the row action a best response and check the others cannot gain
        let values = g.pure_action_values(0, &[0, 3]);
        let br = crate::metrics::argmax(&values).0;
        let at_br = StrategyProfile::pure(&g, &[br, 3]);
        assert!(dwfp_speed(&g, 0, &at_br).unwrap().iter().all(|&s| s <= 0.0));
        assert_eq!(dwfp_speed(&g, 1, &profile).unwrap(), regret_vector(&g, 1, &profile).unwrap());
    }

    #[test]
    fn weight_examples() {
        let gaps = [vec![0.0, 2.0], vec![2.0, 0.0]];
        let speeds = [vec![0.0, 2.0], vec![-2.0, 0.0]];
        assert_eq!(dwfp_weight(&gaps, &speeds), (1.0, false));
        let (w, conv) = dwfp_weight(&gaps, &[vec![0.0, -1.0], vec![-2.0, 0.0]]);
        assert!(conv && w.is_infinite());
        assert_eq!(dwfp_weight(&[vec![0.0, 0.0]], &[vec![0.0, 3.0]]), (0.0, false));
    }

    #[test]
    fn pennies_hand_trace() {
        let mp = named_game("matching_pennies").unwrap();
        let mut s = DwfpState::new(&mp, &[0, 0]).unwrap();
        let out = s.dwfp_step(&mp);
        assert_eq!(out.weight_used, 1.0);
        assert_eq!(s.qbar(), &[vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert_eq!(s.current(), &[0, 1]);
        assert_eq!(s.cumulative_weight(), 1.0);

        let out = s.dwfp_step(&mp);
        assert_eq!(out.weight_used, 1.0);
        assert_eq!(s.qbar(), &[vec![0.0, 0.0], vec![-1.0, 1.0]]);
        assert_eq!(s.current(), &[1, 1]);
        assert_eq!(s.cumulative_weight(), 2.0);
    }

    #[test]
    fn saddle_point_converges() {
        let g = named_game("saddle_2x2").unwrap();
        let mut s = DwfpState::new(&g, &SADDLE_2X2_EQUILIBRIUM).unwrap();
        assert!(!s.dwfp_step(&g).converged);
        let out = s.dwfp_step(&g);
        assert!(out.converged && s.is_converged());
        assert_eq!(s.current(), &SADDLE_2X2_EQUILIBRIUM);
        let pure = StrategyProfile::pure(&g, s.current());
        assert!(exploitability(&g, &pure).unwrap().mean <= 1e-9);
        let avg = s.average_strategy().unwrap();
        assert_eq!(exploitability(&g, &avg).unwrap().mean, 0.0);
        // further steps are no-ops
        assert!(s.dwfp_step(&g).converged);
        assert_eq!(s.iteration(), 2);
    }

    #[test]
    fn unit_weight_reproduces_fp_on_pennies() {
        let mp = named_game("matching_pennies").unwrap();
        let mut dw = DwfpState::new(&mp, &[0, 0]).unwrap().with_fixed_weight(1.0);
        let mut fp = FpState::new(&mp, &[0, 0]).unwrap();
        for _ in 0..200 {
            dw.dwfp_step(&mp);
            fp.fp_step(&mp);
            assert_eq!(dw.current(), fp.current());
            assert_eq!(dw.qbar(), fp.qbar());
            assert_eq!(dw.avg(), fp.avg());
        }
    }

    #[test]
    fn weight_strictly_increases_on_random_games() {
        let g = random_zero_sum(6, 5, 31).unwrap();
        let mut s = DwfpState::new(&g, &[2, 2]).unwrap();
        let mut prev = 0.0;
        for _ in 0..500 {
            let out = s.dwfp_step(&g);
            if out.converged {
                break;
            }
            assert!(s.cumulative_weight() >= prev);
            if out.weight_used > 0.0 {
                assert!(s.cumulative_weight() > prev);
            }
            prev = s.cumulative_weight();
        }
    }

    #[test]
    fn inline_weight_matches_gap_over_speed() {
        let g = random_zero_sum(7, 5, 4).unwrap();
        let mut s = DwfpState::new(&g, &[3, 1]).unwrap();
        s.dwfp_step(&g);
        for _ in 0..300 {
            let profile = StrategyProfile::pure(&g, s.current());
            let gaps: Vec<Vec<f64>> =
                s.qbar().iter().map(|q| dwfp_gap(q, s.cumulative_weight())).collect();
            let speeds: Vec<Vec<f64>> =
                (0..2).map(|p| dwfp_speed(&g, p, &profile).unwrap()).collect();
            let (expected, converged) = dwfp_weight(&gaps, &speeds);
            let out = s.dwfp_step(&g);
            if converged {
                assert!(out.converged);
                break;
            }
            assert_eq!(out.weight_used, expected.min(MAX_STEP_WEIGHT));
        }
    }

    #[test]
    fn tie_break_prefers_instantaneous_value() {
        assert_eq!(argmax_by_instant(&[0.0, 0.0], &[-1.0, 1.0]), 1);
        assert_eq!(argmax_by_instant(&[0.0, 5e-13, -1.0], &[2.0, 1.0, 9.0]), 0);
        assert_eq!(argmax_by_instant(&[1.0, 0.0], &[-1.0, 1.0]), 0);
        assert_eq!(argmax_by_instant(&[1.0, 1.0], &[3.0, 3.0]), 0);
    }
}
