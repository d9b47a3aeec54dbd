use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use greensign::monotone::{
    linear_probe, monotone_iterate, solution_residual, tanh1, tanh2, ArgumentForm, MonotoneCfg,
    MonotoneProblem, RhsFn, SampledFn,
};
use greensign::ProblemParams;

use crate::config::Settings;
use crate::output::{all_finite, num, open};
use crate::{code, usage, ParamArgs};

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Nonlinearity: tanh1 (λ tanh(t − x − y)), tanh2 (λ tanh(t² − 2x + y))
    /// or linear-probe (1 − m x − M y).
    #[arg(long = "f")]
    pub f: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Grid intervals per half-domain.
    #[arg(long)]
    pub n1: Option<usize>,
    /// Maximum number of iterations.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Stop once both sequences move less than this.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Constant initial lower solution; defaults to a constant bound that
    /// suits the nonlinearity (T/2 for tanh1, T² for tanh2).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha0: Option<f64>,
    /// Constant initial upper solution; defaults to the mirrored bound.
    #[arg(long, allow_negative_numbers = true)]
    pub beta0: Option<f64>,
    /// Negative-kernel variant.
    #[arg(long)]
    pub dual: bool,
    /// Feed γ(s) instead of γ(−s) to the nonlinearity.
    #[arg(long)]
    pub literal_args: bool,
    /// Record monotonicity violations instead of aborting.
    #[arg(long)]
    pub lenient: bool,
    /// csv (iter,t,alpha,beta) or json; defaults to the output extension.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

fn rhs(name: &str, lambda: f64, p: ProblemParams) -> Result<RhsFn> {
    match name {
        "tanh1" => Ok(tanh1(lambda)),
        "tanh2" => Ok(tanh2(lambda)),
        "linear-probe" => Ok(linear_probe(p.m, p.big_m)),
        other => usage(format!(
            "unknown nonlinearity `{other}` (tanh1, tanh2, linear-probe)"
        )),
    }
}

/// Constants `(hi, lo)` that bound the solution from above and below.
fn default_bounds(name: &str, p: ProblemParams) -> (f64, f64) {
    let c = match name {
        "tanh1" => 0.5 * p.horizon,
        "tanh2" => p.horizon * p.horizon,
        _ => {
            let c = 2.0 / (p.m + p.big_m);
            return (c.max(0.0), c.min(0.0));
        }
    };
    (c, -c)
}

/// Largest λ for which the tanh nonlinearity satisfies the one-sided
/// Lipschitz hypothesis with constants `m`, `M`.
fn lambda_bound(name: &str, p: ProblemParams) -> Option<(f64, &'static str)> {
    match name {
        "tanh1" => Some((p.m.min(p.big_m), "0 ≤ λ ≤ min{m, M}")),
        "tanh2" => Some(((0.5 * p.m).min(p.big_m), "0 ≤ λ ≤ min{m/2, M}")),
        _ => None,
    }
}

pub fn run(args: &SolveArgs, s: &Settings) -> Result<u8> {
    let Some(name) = s.string("f", args.f.as_deref())? else {
        return usage("solve needs --f (tanh1, tanh2, linear-probe)");
    };
    let params = args.params.params(s)?;
    let lambda = s.f64("lambda", args.lambda, 0.2)?;
    let f = rhs(&name, lambda, params)?;
    let dual = s.bool("dual", args.dual)?;
    // The bound belongs to the positive-kernel hypothesis.
    if let (false, Some((bound, text))) = (dual, lambda_bound(&name, params)) {
        if !(0.0..=bound).contains(&lambda) {
            eprintln!(
                "warning: λ = {lambda} violates the hypothesis {text} = {bound}; running anyway"
            );
        }
    }
    let (hi, lo) = default_bounds(&name, params);
    let (a0, b0) = if dual { (lo, hi) } else { (hi, lo) };
    let alpha0 = s.f64("alpha0", args.alpha0, a0)?;
    let beta0 = s.f64("beta0", args.beta0, b0)?;
    let n1 = s.usize("n1", args.n1, 256)?;
    let mut problem = MonotoneProblem::with_constants(f, params, n1, alpha0, beta0)?;
    problem.dual = dual;
    if s.bool("literal-args", args.literal_args)? {
        problem.form = ArgumentForm::Literal;
    }
    let d = MonotoneCfg::default();
    let cfg = MonotoneCfg {
        max_iter: s.usize("iters", args.iters, d.max_iter)?,
        tol: s.f64("tol", args.tol, d.tol)?,
        strict: !s.bool("lenient", args.lenient)?,
        quadrature: args.params.quadrature(s)?,
        ..d
    };
    let trace = monotone_iterate(&problem, &cfg)?;
    for seq in trace.alpha_seq.iter().chain(&trace.beta_seq) {
        all_finite(seq, "iterate")?;
    }

    let json = match s.string("format", args.format.as_deref())?.as_deref() {
        Some("json") => true,
        Some("csv") => false,
        Some(other) => return usage(format!("unknown format `{other}` (csv, json)")),
        None => args
            .output
            .as_ref()
            .and_then(|p| p.extension())
            .is_some_and(|e| e == "json"),
    };
    let mut w = open(args.output.as_deref())?;
    if json {
        serde_json::to_writer(&mut w, &trace.to_json()).map_err(std::io::Error::from)?;
        writeln!(w)?;
    } else {
        trace.write_csv(&mut w)?;
    }
    w.flush()?;

    let phi = SampledFn::new(problem.grid.clone(), trace.alpha().to_vec())?;
    let residual = solution_residual(&problem.f, &phi);
    let converged = trace
        .converged_at
        .map_or("no".to_string(), |k| k.to_string());
    eprintln!(
        "iterations={} converged_at={converged} final_gap={} residual={} monotone={}",
        trace.iterations(),
        num(trace.final_gap),
        num(residual.max_abs()),
        trace.monotone_ok.iter().all(|&ok| ok)
    );
    Ok(code::OK)
}
