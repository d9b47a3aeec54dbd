use std::fmt;

use thiserror::Error;

/// Which analytic predicate rules a parameter triple out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Singularity {
    /// `m + M = 0`: constants solve the homogeneous problem.
    Eigenline,
    /// `m = k·π/T` for the reflection problem, `k` an integer (including 0).
    ReflectionSpectrum { k: i64 },
    /// `m = 0` for the ODE problem without piecewise term.
    OdeZero,
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Singularity::Eigenline => write!(f, "m + M = 0"),
            Singularity::ReflectionSpectrum { k } => write!(f, "m = {k}·π/T"),
            Singularity::OdeZero => write!(f, "m = 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular parameters: {0}")]
    SingularParameter(Singularity),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("one-sided limit required at t = {t}, s = {s}")]
    AmbiguousSide { t: f64, s: f64 },
    #[error("assembled matrix is singular (det = {det:e}) near m = {m}, M = {big_m}")]
    SingularMatrix { det: f64, m: f64, big_m: f64 },
    #[error("fixed-point denominator vanishes at t = {t}, s = {s}")]
    ZeroDenominator { t: f64, s: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error(
        "monotonicity violated at iteration {iteration} ({sequence} at t = {t}, by {amount:e})"
    )]
    MonotonicityViolation {
        iteration: usize,
        sequence: &'static str,
        t: f64,
        amount: f64,
    },
    #[error("kernel sign gate failed: classified {class}, need {required}")]
    GateFailed { class: String, required: String },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
