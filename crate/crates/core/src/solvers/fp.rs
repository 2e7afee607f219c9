use super::{argmax_lowest, blend, blend_pure, check_initial, profile_from_rows};
use super::{Solver, SolverKind, StepOutcome};
use crate::error::{Error, Result};
use crate::game::{Game, StrategyProfile};

/// Q-value fictitious play: every player best-responds to its running average
/// of action values.
#[derive(Debug, Clone)]
pub struct FpState {
    qbar: Vec<Vec<f64>>,
    current: Vec<usize>,
    avg: Vec<Vec<f64>>,
    t: u64,
}

impl FpState {
    pub fn new(game: &Game, initial: &[usize]) -> Result<Self> {
        check_initial(game, initial)?;
        let zeros = |n: &usize| vec![0.0; *n];
        Ok(Self {
            qbar: game.action_counts().iter().map(zeros).collect(),
            current: initial.to_vec(),
            avg: game.action_counts().iter().map(zeros).collect(),
            t: 0,
        })
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

    /// One simultaneous update with weight 1/t against σ_t.
    pub fn fp_step(&mut self, game: &Game) -> StepOutcome {
        let values: Vec<Vec<f64>> = (0..game.num_players())
            .map(|p| game.pure_action_values(p, &self.current))
            .collect();
        self.t += 1;
        let alpha = 1.0 / self.t as f64;
        for p in 0..game.num_players() {
            blend(&mut self.qbar[p], &values[p], alpha);
            blend_pure(&mut self.avg[p], self.current[p], alpha);
        }
        for p in 0..game.num_players() {
            self.current[p] = argmax_lowest(&self.qbar[p]);
        }
        StepOutcome { weight_used: 1.0, converged: false }
    }
}

impl Solver for FpState {
    fn kind(&self) -> SolverKind {
        SolverKind::Fp
    }

    fn step(&mut self, game: &Game) -> Result<StepOutcome> {
        Ok(self.fp_step(game))
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
        self.t as f64
    }
}
