use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("box ({i}, {j}) lies outside the diagram")]
    InvalidBox { i: usize, j: usize },

    #[error("gamma pole at {0}")]
    GammaPole(f64),

    #[error("resonant parameters: {0}")]
    Resonant(String),

    #[error("t must be nonzero")]
    ZeroT,

    #[error("tau series vanishes at t = {t_re} + {t_im}i")]
    ZeroCrossing { t_re: f64, t_im: f64 },

    #[error("step size underflow at s = {at}: path runs too close to a singular point")]
    StepUnderflow { at: f64 },

    #[error("path passes within {distance:e} of a singular point")]
    PathTooClose { distance: f64 },

    #[error("integration exceeded {0} steps")]
    TooManySteps(usize),

    #[error("degenerate reduction: {0}")]
    Degenerate(String),

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
