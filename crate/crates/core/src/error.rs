use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: alpha = {alpha}, beta = {beta} (need 0 <= alpha < 1 < beta)")]
    Params { alpha: f64, beta: f64 },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("|z| = {radius} exceeds the model's certified radius {certified}")]
    TruncationBudget { radius: f64, certified: f64 },

    #[error("f'({z}) is too close to a critical point")]
    CriticalPoint { z: Complex64 },

    #[error("f vanishes near z = {z} (|f| = {abs})")]
    Singularity { z: Complex64, abs: f64 },

    #[error("series construction failed: {0}")]
    Construction(String),

    #[error("invalid grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
