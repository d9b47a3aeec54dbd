use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use greensign::region::linspace;
use greensign::{kernel_for, KernelKind, SidedPoint};

use crate::config::Settings;
use crate::output::{finite, num, open};
use crate::{code, usage, ParamArgs};

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// ode-exp, ode-piecewise, reflection-second-order,
    /// reflection-first-order or reflection-piecewise.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Comma-separated t values; sides as in `0.5-` or `0+`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<String>,
    /// Comma-separated s values; sides as in `0.5-` or `0+`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub s: Vec<String>,
    /// Fix one coordinate (`t=0` or `s=0.5`) and sample the other across
    /// the domain, both sides at every jump.
    #[arg(long, allow_hyphen_values = true)]
    pub line: Option<String>,
    /// Samples along `--line`.
    #[arg(long)]
    pub points: Option<usize>,
    /// Print `∫ K(t, s) ds` over the domain for each `--t` (default 0).
    #[arg(long)]
    pub integrate: bool,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

fn parse_points(raw: &[String]) -> Result<Vec<SidedPoint>> {
    raw.iter()
        .map(|r| r.trim().parse::<SidedPoint>().map_err(Into::into))
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Axis {
    T,
    S,
}

fn parse_line(raw: &str) -> Result<(Axis, SidedPoint)> {
    let Some((axis, value)) = raw.split_once('=') else {
        return usage(format!(
            "--line expects `t=VALUE` or `s=VALUE`, got `{raw}`"
        ));
    };
    let axis = match axis.trim() {
        "t" => Axis::T,
        "s" => Axis::S,
        other => return usage(format!("--line axis must be t or s, got `{other}`")),
    };
    Ok((axis, value.trim().parse()?))
}

fn row(w: &mut dyn Write, t: SidedPoint, s: SidedPoint, v: f64) -> std::io::Result<()> {
    writeln!(
        w,
        "{},{},{},{},{}",
        num(t.value),
        t.side.name(),
        num(s.value),
        s.side.name(),
        num(v)
    )
}

/// Samples of the free coordinate: a uniform grid plus every jump, the
/// jumps taken from both sides.
fn line_samples(domain: (f64, f64), points: usize, jumps: &[f64]) -> (Vec<SidedPoint>, Vec<f64>) {
    let (a, b) = domain;
    let mut inner: Vec<f64> = jumps
        .iter()
        .map(|&j| j + 0.0)
        .filter(|&j| j > a && j < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    let near_jump = |v: f64| inner.iter().any(|j| (v - j).abs() < 1e-12);
    let mut values: Vec<f64> = linspace(a, b, points)
        .into_iter()
        .filter(|&v| !near_jump(v))
        .collect();
    values.extend(&inner);
    values.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for v in values {
        if near_jump(v) {
            out.push(SidedPoint::minus(v));
            out.push(SidedPoint::plus(v));
        } else {
            out.push(SidedPoint::exact(v));
        }
    }
    (out, inner)
}

pub fn run(args: &EvalArgs, s: &Settings) -> Result<u8> {
    let kind: KernelKind = s.parsed(
        "kernel",
        args.kernel.as_deref(),
        KernelKind::ReflectionPiecewise,
    )?;
    let line = s.string("line", args.line.as_deref())?;
    if !args.integrate && line.is_none() && (args.t.is_empty() || args.s.is_empty()) {
        return usage("eval needs --t and --s, --line, or --integrate");
    }
    let params = args.params.params(s)?;
    let q = args.params.quadrature(s)?;
    let kernel = kernel_for(kind, params, &q)?;
    if matches!(
        kind,
        KernelKind::OdeExp | KernelKind::ReflectionFirstOrder | KernelKind::ReflectionSecondOrder
    ) && params.big_m != 0.0
    {
        eprintln!("note: `{kind}` has no piecewise-constant term; M is ignored");
    }
    let mut w = open(args.output.as_deref())?;

    if args.integrate {
        let ts = if args.t.is_empty() {
            vec![SidedPoint::exact(0.0)]
        } else {
            parse_points(&args.t)?
        };
        let (a, b) = kernel.domain();
        writeln!(w, "t,t_side,integral")?;
        for t in ts {
            let v = finite(kernel.integrate_s(t.value, a, b)?, "integral")?;
            writeln!(w, "{},{},{}", num(t.value), t.side.name(), num(v))?;
        }
    } else if let Some(line) = line {
        let (axis, fixed) = parse_line(&line)?;
        let points = s.usize("points", args.points, 201)?;
        let jumps = match axis {
            Axis::T => kernel.s_breakpoints(fixed.value),
            Axis::S => kernel.t_breakpoints(fixed.value),
        };
        let (samples, inner) = line_samples(kernel.domain(), points, &jumps);
        let eval_at = |free: SidedPoint| match axis {
            Axis::T => kernel.eval(fixed, free).map(|v| (fixed, free, v)),
            Axis::S => kernel.eval(free, fixed).map(|v| (free, fixed, v)),
        };
        writeln!(w, "t,t_side,s,s_side,value")?;
        for free in &samples {
            let (t, s_pt, v) = eval_at(*free)?;
            row(&mut w, t, s_pt, finite(v, "kernel value")?)?;
        }
        let free_name = if axis == Axis::T { "s" } else { "t" };
        for j in inner {
            let left = eval_at(SidedPoint::minus(j))?.2;
            let right = eval_at(SidedPoint::plus(j))?.2;
            eprintln!(
                "jump at {free_name} = {}: K({j}-) - K({j}+) = {}",
                num(j),
                num(left - right)
            );
        }
    } else {
        let (ts, ss) = (parse_points(&args.t)?, parse_points(&args.s)?);
        writeln!(w, "t,t_side,s,s_side,value")?;
        for &t in &ts {
            for &s_pt in &ss {
                let v = finite(kernel.eval(t, s_pt)?, "kernel value")?;
                row(&mut w, t, s_pt, v)?;
            }
        }
    }
    w.flush()?;
    Ok(code::OK)
}
