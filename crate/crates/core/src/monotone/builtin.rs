use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::params::ProblemParams;

use super::MonotoneProblem;

/// Right-hand side `f(t, x, y)` with `x = v(−t)`, `y = v([t])`.
#[derive(Clone)]
pub struct RhsFn {
    name: String,
    f: Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>,
}

impl RhsFn {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        RhsFn {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn call(&self, t: f64, x: f64, y: f64) -> f64 {
        (self.f)(t, x, y)
    }
}

impl fmt::Debug for RhsFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RhsFn({})", self.name)
    }
}

/// `λ tanh(t² − 2x + y)`.
pub fn tanh2(lambda: f64) -> RhsFn {
    RhsFn::new("tanh2", move |t, x, y| {
        lambda * (t * t - 2.0 * x + y).tanh()
    })
}

/// `λ tanh(t − x − y)`.
pub fn tanh1(lambda: f64) -> RhsFn {
    RhsFn::new("tanh1", move |t, x, y| lambda * (t - x - y).tanh())
}

/// `1 − m x − M y`, whose periodic solution is the constant `1/(m + M)`.
pub fn linear_probe(m: f64, big_m: f64) -> RhsFn {
    RhsFn::new("linear-probe", move |_, x, y| 1.0 - m * x - big_m * y)
}

/// First lattice point where the one-sided Lipschitz condition
/// `f(t,x₁,y₁) − f(t,x₂,y₂) ≥ −m(x₁−x₂) − M(y₁−y₂)` fails for
/// `x₁ ≥ x₂`, `y₁ ≥ y₂` in `[lo, hi]`; returns `(t, x₁, y₁, x₂, y₂)`.
pub fn hypothesis_violation(
    f: &RhsFn,
    params: ProblemParams,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Option<(f64, f64, f64, f64, f64)> {
    let samples = samples.max(2);
    let pts: Vec<f64> = (0..samples)
        .map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64)
        .collect();
    let ts: Vec<f64> = (0..samples)
        .map(|k| params.horizon * (2.0 * k as f64 / (samples - 1) as f64 - 1.0))
        .collect();
    for &t in &ts {
        for (i2, &x2) in pts.iter().enumerate() {
            for &x1 in &pts[i2..] {
                for (j2, &y2) in pts.iter().enumerate() {
                    for &y1 in &pts[j2..] {
                        let lhs = f.call(t, x1, y1) - f.call(t, x2, y2);
                        let rhs = -params.m * (x1 - x2) - params.big_m * (y1 - y2);
                        if lhs < rhs - 1e-12 {
                            return Some((t, x1, y1, x2, y2));
                        }
                    }
                }
            }
        }
    }
    None
}

/// The two worked nonlinear examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    /// `f = ⅕ tanh(t² − 2x + y)`, `T = 1`, `m = ½`, `M = ⅕`, `α₀ = 1`,
    /// `β₀ = −1`.
    One,
    /// `f = ⅕ tanh(t − x − y)`, `T = 1.6`, `m = 0.21`, `M = 0.2`,
    /// `α₀ = T/2`, `β₀ = −T/2`.
    Two,
}

impl Example {
    pub fn problem(self, n: usize) -> Result<MonotoneProblem> {
        match self {
            Example::One => {
                let p = ProblemParams::new(0.5, 0.2, 1.0)?;
                MonotoneProblem::with_constants(tanh2(0.2), p, n, 1.0, -1.0)
            }
            Example::Two => {
                let p = ProblemParams::new(0.21, 0.2, 1.6)?;
                MonotoneProblem::with_constants(tanh1(0.2), p, n, 0.8, -0.8)
            }
        }
    }

    /// Iteration counts used for the worked runs.
    pub fn default_iterations(self) -> usize {
        match self {
            Example::One => 40,
            Example::Two => 10,
        }
    }
}
