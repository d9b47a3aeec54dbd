//! Monotone iteration between a lower and an upper solution of
//!
//! `v'(t) = f(t, v(−t), v([t]))`, `v(−T) = v(T)`,
//!
//! using `γ ↦ ∫ H(t,s) [f(s, γ(−s), γ([s])) + m γ(−s) + M γ([s])] ds`
//! with the kernel of the linear problem.

mod builtin;
mod grid;

pub use builtin::{hypothesis_violation, linear_probe, tanh1, tanh2, Example, RhsFn};
pub use grid::{SampledFn, UniformGrid};

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::{assemble, AssembledKernel};
use crate::error::{Error, Result};
use crate::params::{KernelKind, ProblemParams};
use crate::quadrature::QuadratureCfg;
use crate::region::{classify_point, SignClass};
use crate::sided::SidedPoint;

/// Which argument the nonlinearity sees in the integral operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ArgumentForm {
    /// `f(s, γ(−s), γ([s]))`, consistent with the differential equation.
    #[default]
    Reflected,
    /// `f(s, γ(s), γ([s]))`.
    Literal,
}

#[derive(Clone)]
pub struct MonotoneProblem {
    pub f: RhsFn,
    pub params: ProblemParams,
    pub grid: UniformGrid,
    pub alpha0: Vec<f64>,
    pub beta0: Vec<f64>,
    /// Negative-kernel variant: `α` increases, `β` decreases, `α ≤ β`.
    pub dual: bool,
    pub form: ArgumentForm,
}

impl MonotoneProblem {
    /// Constant initial functions on a grid of `2n + 1` nodes.
    pub fn with_constants(
        f: RhsFn,
        params: ProblemParams,
        n: usize,
        alpha0: f64,
        beta0: f64,
    ) -> Result<Self> {
        let grid = UniformGrid::new(params.horizon, n)?;
        let len = grid.len();
        Ok(MonotoneProblem {
            f,
            params,
            grid,
            alpha0: vec![alpha0; len],
            beta0: vec![beta0; len],
            dual: false,
            form: ArgumentForm::Reflected,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotoneCfg {
    pub max_iter: usize,
    /// Stop once both sequences move less than this in sup norm.
    pub tol: f64,
    pub slack: f64,
    /// Abort on a monotonicity violation instead of flagging it.
    pub strict: bool,
    pub quadrature: QuadratureCfg,
}

impl Default for MonotoneCfg {
    fn default() -> Self {
        MonotoneCfg {
            max_iter: 64,
            tol: 1e-8,
            slack: 1e-9,
            strict: true,
            quadrature: QuadratureCfg::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub nodes: Vec<f64>,
    pub alpha_seq: Vec<Vec<f64>>,
    pub beta_seq: Vec<Vec<f64>>,
    pub converged_at: Option<usize>,
    pub final_gap: f64,
    /// Per step: ordering held within the slack.
    pub monotone_ok: Vec<bool>,
}

impl IterationTrace {
    pub fn alpha(&self) -> &[f64] {
        self.alpha_seq
            .last()
            .expect("trace holds the initial iterate")
    }

    pub fn beta(&self) -> &[f64] {
        self.beta_seq
            .last()
            .expect("trace holds the initial iterate")
    }

    pub fn iterations(&self) -> usize {
        self.alpha_seq.len() - 1
    }

    /// CSV with header `iter,t,alpha,beta`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "iter,t,alpha,beta")?;
        for (it, (a, b)) in self.alpha_seq.iter().zip(&self.beta_seq).enumerate() {
            for ((t, x), y) in self.nodes.iter().zip(a).zip(b) {
                writeln!(w, "{it},{t:.16e},{x:.16e},{y:.16e}")?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trace serializes")
    }
}

/// The trapezoid discretisation of the integral operator. The kernel jumps
/// at `s = t` and at integers, all of which are nodes, so each panel uses
/// the one-sided kernel values from inside it.
pub struct DiscreteOperator {
    grid: UniformGrid,
    params: ProblemParams,
    /// `H(t_k, s_j⁺)`, row-major in `k`.
    right: Vec<f64>,
    /// `H(t_k, s_j⁻)`, row-major in `k`.
    left: Vec<f64>,
}

impl DiscreteOperator {
    pub fn new(kernel: &AssembledKernel, grid: UniformGrid) -> Result<Self> {
        let nodes = grid.nodes();
        let len = nodes.len();
        let side_weights = |side: fn(f64) -> SidedPoint| -> Result<Vec<Vec<f64>>> {
            nodes
                .par_iter()
                .map(|&s| kernel.label_weights(side(s)))
                .collect()
        };
        let w_right = side_weights(SidedPoint::plus)?;
        let w_left = side_weights(SidedPoint::minus)?;
        let rows: Vec<(Vec<f64>, Vec<f64>)> = nodes
            .par_iter()
            .map(|&t| -> Result<_> {
                let ints = kernel.cell_integrals(t)?;
                let tp = SidedPoint::exact(t);
                let mut r = Vec::with_capacity(len);
                let mut l = Vec::with_capacity(len);
                for (j, &s) in nodes.iter().enumerate() {
                    r.push(kernel.eval_parts(tp, SidedPoint::plus(s), &ints, &w_right[j])?);
                    l.push(kernel.eval_parts(tp, SidedPoint::minus(s), &ints, &w_left[j])?);
                }
                Ok((r, l))
            })
            .collect::<Result<_>>()?;
        let mut right = Vec::with_capacity(len * len);
        let mut left = Vec::with_capacity(len * len);
        for (r, l) in rows {
            right.extend(r);
            left.extend(l);
        }
        if right.iter().chain(&left).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("kernel table".into()));
        }
        Ok(DiscreteOperator {
            grid,
            params: kernel_params(kernel),
            right,
            left,
        })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// The integrand `f(s, γ(±s), γ([s])) + m γ(−s) + M γ([s])` at every
    /// node, approached from the right and from the left.
    fn integrand(&self, f: &RhsFn, gamma: &[f64], form: ArgumentForm) -> (Vec<f64>, Vec<f64>) {
        let g = &self.grid;
        let ProblemParams { m, big_m, .. } = self.params;
        let eval = |k: usize, side: fn(f64) -> SidedPoint| {
            let s = g.node(k);
            let mirrored = gamma[g.mirror(k)];
            let x = match form {
                ArgumentForm::Reflected => mirrored,
                ArgumentForm::Literal => gamma[k],
            };
            let y = gamma[g.label_node(side(s))];
            f.call(s, x, y) + m * mirrored + big_m * y
        };
        let right = (0..g.len()).map(|k| eval(k, SidedPoint::plus)).collect();
        let left = (0..g.len()).map(|k| eval(k, SidedPoint::minus)).collect();
        (right, left)
    }

    pub fn apply(&self, f: &RhsFn, gamma: &[f64], form: ArgumentForm) -> Result<Vec<f64>> {
        let len = self.grid.len();
        if gamma.len() != len {
            return Err(Error::GridMismatch(format!(
                "function has {} samples, grid has {len}",
                gamma.len()
            )));
        }
        let (g_right, g_left) = self.integrand(f, gamma, form);
        let half = 0.5 * self.grid.step();
        let out: Vec<f64> = (0..len)
            .into_par_iter()
            .map(|k| {
                let r = &self.right[k * len..(k + 1) * len];
                let l = &self.left[k * len..(k + 1) * len];
                let mut acc = 0.0;
                for j in 0..len - 1 {
                    acc += r[j] * g_right[j] + l[j + 1] * g_left[j + 1];
                }
                acc * half
            })
            .collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("operator image".into()));
        }
        Ok(out)
    }
}

fn kernel_params(kernel: &AssembledKernel) -> ProblemParams {
    use crate::closed_form::Kernel;
    kernel.params()
}

/// One application of the operator on the problem's grid.
pub fn operator_t(problem: &MonotoneProblem, gamma: &[f64], q: &QuadratureCfg) -> Result<Vec<f64>> {
    let kernel = assemble(problem.params, KernelKind::ReflectionFirstOrder, q)?;
    DiscreteOperator::new(&kernel, problem.grid.clone())?.apply(&problem.f, gamma, problem.form)
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest amount by which `upper ≥ lower` fails, with the node.
fn worst_excess(lower: &[f64], upper: &[f64]) -> (f64, usize) {
    lower
        .iter()
        .zip(upper)
        .map(|(l, u)| l - u)
        .enumerate()
        .fold(
            (f64::NEG_INFINITY, 0),
            |acc, (k, d)| if d > acc.0 { (d, k) } else { acc },
        )
}

/// The kernel must be positive (negative for the dual variant).
pub fn sign_gate(params: ProblemParams, dual: bool, q: &QuadratureCfg) -> Result<()> {
    let class = classify_point(params.m, params.big_m, params.horizon, q);
    let required = if dual {
        SignClass::Negative
    } else {
        SignClass::Positive
    };
    if class == required {
        Ok(())
    } else {
        Err(Error::GateFailed {
            class: class.name().into(),
            required: required.name().into(),
        })
    }
}

pub fn monotone_iterate(problem: &MonotoneProblem, cfg: &MonotoneCfg) -> Result<IterationTrace> {
    sign_gate(problem.params, problem.dual, &cfg.quadrature)?;
    let len = problem.grid.len();
    if problem.alpha0.len() != len || problem.beta0.len() != len {
        return Err(Error::GridMismatch(
            "initial functions do not match the grid".into(),
        ));
    }
    // Orientation: `hi` is nonincreasing, `lo` nondecreasing, `lo ≤ hi`.
    let (hi0, lo0) = if problem.dual {
        (&problem.beta0, &problem.alpha0)
    } else {
        (&problem.alpha0, &problem.beta0)
    };
    let (gap, k) = worst_excess(lo0, hi0);
    if gap > cfg.slack {
        return Err(Error::Domain(format!(
            "initial functions are not ordered at t = {} (by {gap:e})",
            problem.grid.node(k)
        )));
    }
    let kernel = assemble(
        problem.params,
        KernelKind::ReflectionFirstOrder,
        &cfg.quadrature,
    )?;
    let op = DiscreteOperator::new(&kernel, problem.grid.clone())?;

    let mut alpha_seq = vec![problem.alpha0.clone()];
    let mut beta_seq = vec![problem.beta0.clone()];
    let mut monotone_ok = Vec::new();
    let mut converged_at = None;
    for it in 1..=cfg.max_iter {
        let a_prev = alpha_seq.last().expect("nonempty");
        let b_prev = beta_seq.last().expect("nonempty");
        let a = op.apply(&problem.f, a_prev, problem.form)?;
        let b = op.apply(&problem.f, b_prev, problem.form)?;
        let (hi_prev, lo_prev, hi, lo, hi_name, lo_name) = if problem.dual {
            (b_prev, a_prev, &b, &a, "beta", "alpha")
        } else {
            (a_prev, b_prev, &a, &b, "alpha", "beta")
        };
        let checks = [
            (worst_excess(hi, hi_prev), hi_name),
            (worst_excess(lo_prev, lo), lo_name),
            (worst_excess(lo, hi), "ordering"),
        ];
        let mut ok = true;
        for ((excess, k), sequence) in checks {
            if excess > cfg.slack {
                ok = false;
                if cfg.strict {
                    return Err(Error::MonotonicityViolation {
                        iteration: it,
                        sequence,
                        t: problem.grid.node(k),
                        amount: excess,
                    });
                }
            }
        }
        monotone_ok.push(ok);
        let step = sup_dist(&a, a_prev).max(sup_dist(&b, b_prev));
        alpha_seq.push(a);
        beta_seq.push(b);
        if step < cfg.tol {
            converged_at = Some(it);
            break;
        }
    }
    let final_gap = sup_dist(
        alpha_seq.last().expect("nonempty"),
        beta_seq.last().expect("nonempty"),
    );
    Ok(IterationTrace {
        nodes: problem.grid.nodes(),
        alpha_seq,
        beta_seq,
        converged_at,
        final_gap,
        monotone_ok,
    })
}

/// Pointwise residual `φ'(t) − f(t, φ(−t), φ([t]))` by central differences
/// at interior nodes off the integers, and the periodicity gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub nodes: Vec<f64>,
    pub residuals: Vec<f64>,
    pub periodicity_gap: f64,
}

impl ResidualReport {
    pub fn max_abs(&self) -> f64 {
        self.residuals.iter().fold(0.0, |acc, r| acc.max(r.abs()))
    }

    pub fn min(&self) -> f64 {
        self.residuals.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.residuals
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn solution_residual(f: &RhsFn, phi: &SampledFn) -> ResidualReport {
    let g = &phi.grid;
    let h = g.step();
    let mut nodes = Vec::new();
    let mut residuals = Vec::new();
    for k in 1..g.len() - 1 {
        let t = g.node(k);
        if g.is_integer_node(k) {
            continue;
        }
        let deriv = (phi.values[k + 1] - phi.values[k - 1]) / (2.0 * h);
        let x = phi.values[g.mirror(k)];
        let y = phi.values[g.label_node(SidedPoint::exact(t))];
        nodes.push(t);
        residuals.push(deriv - f.call(t, x, y));
    }
    let periodicity_gap = (phi.values[0] - phi.values[g.len() - 1]).abs();
    ResidualReport {
        nodes,
        residuals,
        periodicity_gap,
    }
}

/// A lower solution satisfies `α' ≥ f(t, α(−t), α([t]))` a.e. and
/// `α(−T) ≤ α(T)`. Returns the report and whether both hold within `tol`.
pub fn check_lower_solution(f: &RhsFn, alpha: &SampledFn, tol: f64) -> (ResidualReport, bool) {
    let r = solution_residual(f, alpha);
    let ok = r.min() >= -tol && alpha.values[0] <= alpha.values[alpha.values.len() - 1] + tol;
    (r, ok)
}

/// Upper solution: `β' ≤ f(t, β(−t), β([t]))` and `β(−T) ≥ β(T)`.
pub fn check_upper_solution(f: &RhsFn, beta: &SampledFn, tol: f64) -> (ResidualReport, bool) {
    let r = solution_residual(f, beta);
    let ok = r.max() <= tol && beta.values[0] + tol >= beta.values[beta.values.len() - 1];
    (r, ok)
}
