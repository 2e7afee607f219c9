use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::solvers::{parse_solver_list, EvalSchedule, SolverKind};

/// Everything needed to reproduce a benchmark sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub solvers: Vec<SolverKind>,
    pub rows: usize,
    pub cols: usize,
    pub num_games: usize,
    pub base_seed: u64,
    pub max_iterations: u64,
    pub max_weight: f64,
    /// Number of log-spaced evaluation points. `None` records at every
    /// rounded power of 1.25.
    pub eval_points: Option<usize>,
    pub output_path: PathBuf,
    pub oracle_delta: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            solvers: SolverKind::ALL.to_vec(),
            rows: 10,
            cols: 10,
            num_games: 30,
            base_seed: 0,
            max_iterations: 100_000,
            max_weight: f64::INFINITY,
            eval_points: None,
            output_path: PathBuf::from("results.csv"),
            oracle_delta: 1e-3,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.solvers.is_empty() {
            return fail("at least one solver is required");
        }
        if self.rows == 0 || self.cols == 0 {
            return fail("rows and cols must be at least 1");
        }
        if self.num_games == 0 {
            return fail("games must be at least 1");
        }
        if self.max_iterations == 0 {
            return fail("iters must be at least 1");
        }
        if self.max_weight.is_nan() || self.max_weight <= 0.0 {
            return fail("max-weight must be positive");
        }
        if matches!(self.eval_points, Some(n) if n < 2) {
            return fail("points must be at least 2");
        }
        if !(self.oracle_delta > 0.0 && self.oracle_delta <= 0.01) {
            return fail("oracle-delta must lie in (0, 0.01]");
        }
        Ok(())
    }

    pub fn schedule(&self) -> EvalSchedule {
        match self.eval_points {
            Some(n) => EvalSchedule::log_spaced(self.max_iterations, n),
            None => EvalSchedule::geometric(self.max_iterations),
        }
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> {
        let base = self.base_seed;
        (0..self.num_games as u64).map(move |k| base.wrapping_add(k))
    }

    /// Sets one field from its flag name. Underscores and dashes are
    /// interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let bad = |what: &str| Error::Config(format!("bad value `{value}` for {what}"));
        match key.trim().replace('_', "-").as_str() {
            "solvers" => self.solvers = parse_solver_list(value)?,
            "rows" => self.rows = value.parse().map_err(|_| bad("rows"))?,
            "cols" => self.cols = value.parse().map_err(|_| bad("cols"))?,
            "games" => self.num_games = value.parse().map_err(|_| bad("games"))?,
            "seed" => self.base_seed = value.parse().map_err(|_| bad("seed"))?,
            "iters" => self.max_iterations = value.parse().map_err(|_| bad("iters"))?,
            "max-weight" => self.max_weight = value.parse().map_err(|_| bad("max-weight"))?,
            "points" => {
                self.eval_points = match value {
                    "geometric" => None,
                    _ => Some(value.parse().map_err(|_| bad("points"))?),
                }
            }
            "out" => self.output_path = PathBuf::from(value),
            "oracle-delta" => {
                self.oracle_delta = value.parse().map_err(|_| bad("oracle-delta"))?
            }
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and `#`
    /// comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
            self.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut config = Self::default();
        config.apply_text(&std::fs::read_to_string(path)?)?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!((c.rows, c.cols, c.num_games, c.max_iterations), (10, 10, 30, 100_000));
        assert_eq!(c.seeds().count(), 30);
    }

    #[test]
    fn parses_key_values() {
        let mut c = ExperimentConfig::default();
        c.apply_text(
            "# sweep\nsolvers = fp,dwfp\nrows=5\ncols = 6 # trailing\n\ngames=3\nseed=42\n\
             iters=1000\nmax_weight=1e6\npoints=12\nout=/tmp/x.csv\noracle-delta=5e-4\n",
        )
        .unwrap();
        assert_eq!(c.solvers, vec![SolverKind::Fp, SolverKind::Dwfp]);
        assert_eq!((c.rows, c.cols, c.num_games, c.base_seed), (5, 6, 3, 42));
        assert_eq!((c.max_iterations, c.max_weight, c.eval_points), (1000, 1e6, Some(12)));
        assert_eq!(c.output_path, PathBuf::from("/tmp/x.csv"));
        assert_eq!(c.oracle_delta, 5e-4);
        assert_eq!(c.seeds().collect::<Vec<_>>(), vec![42, 43, 44]);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = ExperimentConfig::default();
        assert!(c.apply_text("rows").is_err());
        assert!(c.apply_text("colour=red").is_err());
        assert!(c.apply_text("rows=-1").is_err());
        assert!(c.apply_text("solvers=fp,cfr").is_err());

        for (key, value) in [("games", "0"), ("iters", "0"), ("points", "1"), ("oracle-delta", "0.5")] {
            let mut c = ExperimentConfig::default();
            c.set(key, value).unwrap();
            assert!(matches!(c.validate(), Err(Error::Config(_))), "{key}={value}");
        }
    }

    #[test]
    fn schedule_choice() {
        let mut c = ExperimentConfig { max_iterations: 1000, ..Default::default() };
        assert_eq!(c.schedule(), EvalSchedule::geometric(1000));
        c.eval_points = Some(10);
        assert_eq!(c.schedule().iterations().len(), 10);
    }
}
