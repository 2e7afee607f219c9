use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite payoff for player {player} at entry {index}")]
    NonFinite { player: usize, index: usize },

    #[error("zero-sum flag set but payoffs sum to {sum} at pure profile {index}")]
    NotZeroSum { index: usize, sum: f64 },

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("average strategy requested before any step was taken")]
    NoIterations,

    #[error("unknown solver kind `{0}`")]
    UnknownSolver(String),

    #[error("unknown game `{0}`")]
    UnknownGame(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("not enough usable points for a fit: need {needed}, have {have}")]
    InsufficientData { needed: usize, have: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
