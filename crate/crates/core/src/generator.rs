//! Seeded game construction: Gaussian zero-sum matrices and named fixtures.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::game::Game;

/// SplitMix64 generator. Output streams are bit-identical on every platform.
#[derive(Debug, Clone)]
pub struct Prng {
    state: u64,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw (Box-Muller, cosine branch; two uniforms per value).
    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        box_muller(u1, u2)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_uniform() * n as f64) as usize
    }
}

pub(crate) fn box_muller(u1: f64, u2: f64) -> f64 {
    (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Two-player zero-sum game with i.i.d. N(0,1) row payoffs (row-major) and
/// exactly negated column payoffs.
pub fn random_zero_sum(rows: usize, cols: usize, seed: u64) -> Result<Game> {
    if rows == 0 || cols == 0 {
        return Err(Error::Config(format!("game dimensions must be positive, got {rows}x{cols}")));
    }
    let mut rng = Prng::new(seed);
    let payoffs = (0..rows * cols).map(|_| rng.gaussian()).collect();
    Game::zero_sum_matrix(rows, cols, payoffs)
}

pub const NAMED_GAMES: [&str; 3] = ["matching_pennies", "rps", "saddle_2x2"];

/// Pure equilibrium of `saddle_2x2`: top row, right column.
pub const SADDLE_2X2_EQUILIBRIUM: [usize; 2] = [0, 1];

pub fn named_game(name: &str) -> Result<Game> {
    let row = match name {
        "matching_pennies" => vec![1.0, -1.0, -1.0, 1.0],
        "rps" => vec![0.0, -1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 1.0, 0.0],
        "saddle_2x2" => vec![2.0, 1.0, 0.0, -1.0],
        _ => return Err(Error::UnknownGame(name.to_string())),
    };
    let n = if row.len() == 9 { 3 } else { 2 };
    Game::zero_sum_matrix(n, n, row)
}
