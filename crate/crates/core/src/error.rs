use thiserror::Error;

use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: endpoints must be finite with lo <= hi")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("attitude {0} lies outside [0, 1]")]
    InvalidAttitude(f64),

    #[error("{what} = {value} lies outside {domain}")]
    OutsideDomain {
        what: &'static str,
        value: f64,
        domain: Interval,
    },

    #[error("set {set} is not contained in {domain}")]
    SetOutsideDomain { set: Interval, domain: Interval },

    #[error("closed-form reduction requires a utility monotone in the opponent strategy")]
    UnsupportedReduction,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("equilibrium did not converge: residual {residual:e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },

    #[error("closed form undefined: {0}")]
    UndefinedFormula(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("grid resolution must be at least {min}, got {got}")]
    Resolution { min: usize, got: usize },

    #[error("attitude matrix is incomplete: {0}")]
    IncompleteMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
