use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("log-gamma pole at non-positive integer {0}")]
    GammaPole(f64),

    #[error("contour cannot separate the pole families: left poles end at {left}, right poles start at {right}")]
    ContourSeparation { left: f64, right: f64 },

    #[error("contour crossing {crossing} lies outside the admissible strip ({left}, {right})")]
    CrossingOutsideStrip { crossing: f64, left: f64, right: f64 },

    #[error("pole lattices of the bivariate kernel collide; no admissible contour pair exists")]
    PoleCollision,

    #[error("{what} did not converge: error estimate {error:e} above tolerance {tolerance:e}")]
    NonConvergence {
        what: &'static str,
        error: f64,
        tolerance: f64,
    },

    #[error("mean SNR does not exist for m = {m} <= 2/alpha = {bound}")]
    MeanNonexistence { m: f64, bound: f64 },

    #[error("{what} = {value} lies outside [0, 1] beyond tolerance")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("asymptotic exponent candidates tie ({0}); the tie case has no defined coefficient")]
    DegenerateTie(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
