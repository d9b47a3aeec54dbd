use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::Args;
use greensign::region::{boundary_polylines, linspace, Polyline, ScanCfg};
use greensign::{sweep_region, ClassifyOptions, Family, SignClass, Strategy};

use crate::config::Settings;
use crate::output::{num, open};
use crate::{code, usage, ParamArgs};

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// `reflection` (default) or `ode`.
    #[arg(long)]
    pub family: Option<String>,
    /// Range of m as `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub m_range: Option<String>,
    /// Range of M as `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub big_m_range: Option<String>,
    /// Lattice points per axis, `N` or `NxK` (m by M).
    #[arg(long)]
    pub resolution: Option<String>,
    /// auto, closed-form, closed-form-ode, min-scan or fixed-point.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Scan grid points per unit length.
    #[arg(long)]
    pub density: Option<usize>,
    /// csv or json; defaults to the output extension, else csv.
    #[arg(long)]
    pub format: Option<String>,
    /// Also emit the closed-form boundary curves (T ≤ 1).
    #[arg(long)]
    pub boundary: bool,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

fn parse_range(raw: &str, what: &str) -> Result<(f64, f64)> {
    let parsed = raw
        .split_once(':')
        .and_then(|(lo, hi)| Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?)));
    match parsed {
        Some(r) => Ok(r),
        None => usage(format!("{what} expects `lo:hi`, got `{raw}`")),
    }
}

fn parse_resolution(raw: &str) -> Result<(usize, usize)> {
    let parsed = match raw.split_once('x') {
        Some((a, b)) => a.trim().parse().ok().zip(b.trim().parse().ok()),
        None => raw.trim().parse().ok().map(|n| (n, n)),
    };
    match parsed {
        Some(r) => Ok(r),
        None => usage(format!("--resolution expects `N` or `NxK`, got `{raw}`")),
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Format {
    Csv,
    Json,
}

fn format_for(explicit: Option<String>, output: Option<&Path>) -> Result<Format> {
    match explicit.as_deref() {
        Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some(other) => usage(format!("unknown format `{other}` (csv, json)")),
        None => Ok(
            match output.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
                Some("json") => Format::Json,
                _ => Format::Csv,
            },
        ),
    }
}

fn write_polylines(path: &Path, lines: &[Polyline]) -> Result<()> {
    let mut w = open(Some(path))?;
    writeln!(w, "curve,m,M")?;
    for line in lines {
        for &(m, big_m) in &line.points {
            writeln!(w, "{},{},{}", line.name, num(m), num(big_m))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: &RegionArgs, s: &Settings) -> Result<u8> {
    let family: Family = s.parsed("family", args.family.as_deref(), Family::Reflection)?;
    let horizon = args.params.horizon(s)?;
    let (m_lo, m_hi) = parse_range(
        &s.string("m-range", args.m_range.as_deref())?
            .unwrap_or("-2:2".into()),
        "--m-range",
    )?;
    let (b_lo, b_hi) = parse_range(
        &s.string("big-m-range", args.big_m_range.as_deref())?
            .unwrap_or("-2:2".into()),
        "--big-m-range",
    )?;
    let (nm, nb) = parse_resolution(
        &s.string("resolution", args.resolution.as_deref())?
            .unwrap_or("101".into()),
    )?;
    let strategy = match s.string("strategy", args.strategy.as_deref())?.as_deref() {
        None | Some("auto") => None,
        Some(other) => Some(other.parse::<Strategy>()?),
    };
    let scan = ScanCfg {
        density: s.usize("density", args.density, ScanCfg::default().density)?,
        quadrature: args.params.quadrature(s)?,
    };
    let opts = ClassifyOptions {
        family,
        strategy,
        scan,
    };
    let format = format_for(
        s.string("format", args.format.as_deref())?,
        args.output.as_deref(),
    )?;
    let boundary = s.bool("boundary", args.boundary)?;
    if boundary && format == Format::Csv && args.output.is_none() {
        return usage("--boundary with CSV output needs --output");
    }

    let m_axis = linspace(m_lo, m_hi, nm);
    let grid = sweep_region(m_axis.clone(), linspace(b_lo, b_hi, nb), horizon, &opts);
    let polylines = if boundary && !grid.is_empty() {
        match boundary_polylines(family, &m_axis, horizon) {
            Ok(p) => Some(p),
            Err(e) => {
                eprintln!("note: no closed-form boundary: {e}");
                None
            }
        }
    } else {
        None
    };

    let mut w = open(args.output.as_deref())?;
    if !grid.is_empty() {
        match format {
            Format::Csv => grid.write_csv(&mut w)?,
            Format::Json => {
                let mut doc = grid.to_json();
                if let Some(p) = &polylines {
                    doc["boundary"] = serde_json::to_value(p)?;
                }
                serde_json::to_writer(&mut w, &doc).map_err(std::io::Error::from)?;
                writeln!(w)?;
            }
        }
    }
    w.flush()?;
    if let (Some(p), Format::Csv, Some(out)) = (&polylines, format, &args.output) {
        write_polylines(&out.with_extension("boundary.csv"), p)?;
    }

    let counts: Vec<String> = SignClass::ALL
        .iter()
        .map(|&c| format!("{}={}", c.name(), grid.count(c)))
        .collect();
    eprintln!("{} cells: {}", grid.classes.len(), counts.join(" "));
    Ok(code::OK)
}
