use std::io::Write;

use anyhow::Result;
use clap::Args;
use greensign::invariants::{run_suite, SuiteCfg};
use greensign::ProblemParams;

use crate::config::Settings;
use crate::output::open;
use crate::{code, usage, ParamArgs};

/// Parameter points checked when no `--at` is given.
const DEFAULT_POINTS: [(f64, f64, f64); 4] = [
    (0.21, 0.2, 1.6),
    (0.3, 0.2, 1.3),
    (0.5, 0.2, 1.0),
    (-0.4, 0.9, 2.0),
];

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Seed of the random sample points.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random samples per check.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Parameter point `m=..,M=..,T=..`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Vec<String>,
}

fn parse_at(raw: &str) -> Result<ProblemParams> {
    let (mut m, mut big_m, mut horizon) = (None, None, None);
    for part in raw.split(',') {
        let Some((k, v)) = part.split_once('=') else {
            return usage(format!("--at expects `m=..,M=..,T=..`, got `{raw}`"));
        };
        let Ok(v) = v.trim().parse::<f64>() else {
            return usage(format!("--at: `{v}` is not a number"));
        };
        match k.trim() {
            "m" => m = Some(v),
            "M" => big_m = Some(v),
            "T" => horizon = Some(v),
            other => return usage(format!("--at: unknown key `{other}`")),
        }
    }
    match (m, big_m, horizon) {
        (Some(m), Some(big_m), Some(horizon)) => Ok(ProblemParams::new(m, big_m, horizon)?),
        _ => usage(format!("--at needs m, M and T, got `{raw}`")),
    }
}

pub fn run(args: &CheckArgs, s: &Settings) -> Result<u8> {
    let d = SuiteCfg::default();
    let cfg = SuiteCfg {
        seed: s.usize("seed", args.seed.map(|v| v as usize), d.seed as usize)? as u64,
        samples: s.usize("samples", args.samples, d.samples)?,
        quadrature: args.params.quadrature(s)?,
        ..d
    };
    let points = if !args.at.is_empty() {
        args.at
            .iter()
            .map(|a| parse_at(a))
            .collect::<Result<Vec<_>>>()?
    } else if args.params.m.is_some()
        || args.params.big_m.is_some()
        || args.params.horizon.is_some()
    {
        vec![args.params.params(s)?]
    } else {
        DEFAULT_POINTS
            .iter()
            .map(|&(m, b, t)| ProblemParams::new(m, b, t))
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut out = open(None)?;
    let mut failed = 0;
    for p in points {
        writeln!(out, "m={} M={} T={}", p.m, p.big_m, p.horizon)?;
        for r in run_suite(p, &cfg)? {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "  {verdict} {} (worst {:e}, tol {:e})",
                r.name, r.worst, r.tol
            )?;
            failed += usize::from(!r.passed);
        }
    }
    out.flush()?;
    if failed > 0 {
        eprintln!("{failed} check(s) failed");
        return Ok(code::CHECK_FAILED);
    }
    Ok(code::OK)
}
