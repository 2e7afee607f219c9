//! Iterative equilibrium solvers for finite normal-form games.
//!
//! Five dynamics share one stepping interface ([`solvers::Solver`]): fictitious
//! play, regret matching, RM+, Greedy RM and dynamically weighted fictitious
//! play (DW-FP). The [`harness`] module runs seeded benchmark sweeps over random
//! zero-sum games and fits convergence rates to the resulting traces.

pub mod error;
pub mod game;
pub mod generator;
pub mod harness;
pub mod metrics;
pub mod solvers;

pub use error::{Error, Result};
pub use game::{Game, MixedStrategy, StrategyProfile};
pub use solvers::{SolverKind, TraceRow};
