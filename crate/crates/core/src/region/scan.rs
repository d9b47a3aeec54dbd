//! Candidate-set minimisation and the fixed-point operator.

use serde::{Deserialize, Serialize};

use crate::assembly::{assemble, AssembledKernel};
use crate::closed_form::Kernel;
use crate::error::{Error, Result};
use crate::params::{Family, KernelKind, ProblemParams};
use crate::quadrature::QuadratureCfg;
use crate::sided::SidedPoint;

/// Which parts of the proven candidate set to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    /// `q(n±) = K(n±⁻, n±)` at interior integers, and the diagonal limits at
    /// both ends of the domain.
    pub diagonal_at_integers: bool,
    /// `q(s)` on a uniform `s` grid.
    pub diagonal_grid: bool,
    /// `K(t, n±)` for `t` on a grid refined at every breakpoint.
    pub integer_columns: bool,
}

impl CandidateSet {
    pub const FULL: CandidateSet = CandidateSet {
        diagonal_at_integers: true,
        diagonal_grid: true,
        integer_columns: true,
    };
    pub const DIAGONAL: CandidateSet = CandidateSet {
        diagonal_at_integers: true,
        diagonal_grid: false,
        integer_columns: false,
    };
    pub const COLUMNS: CandidateSet = CandidateSet {
        diagonal_at_integers: false,
        diagonal_grid: false,
        integer_columns: true,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanCfg {
    /// Uniform grid points per unit length.
    pub density: usize,
    pub quadrature: QuadratureCfg,
}

impl Default for ScanCfg {
    fn default() -> Self {
        ScanCfg {
            density: 33,
            quadrature: QuadratureCfg::default(),
        }
    }
}

fn uniform(a: f64, b: f64, density: usize) -> Vec<f64> {
    let n = (((b - a) * density as f64).ceil() as usize).max(1);
    (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
}

/// Interior integers on both sides, plus the inward limits at the ends.
fn sided_integers(kernel: &dyn Kernel) -> Vec<SidedPoint> {
    let (a, b) = kernel.domain();
    let mut pts = vec![SidedPoint::plus(a)];
    for n in kernel.layout().breakpoints() {
        pts.push(SidedPoint::minus(n));
        pts.push(SidedPoint::plus(n));
    }
    pts.push(SidedPoint::minus(b));
    pts
}

/// `t` values for a column at `s`: a uniform grid plus both sides of every
/// breakpoint of `K(·, s)`.
fn column_points(kernel: &dyn Kernel, s: SidedPoint, density: usize) -> Vec<SidedPoint> {
    let (a, b) = kernel.domain();
    let mut pts: Vec<SidedPoint> = uniform(a, b, density)
        .into_iter()
        .filter(|&t| t != s.value)
        .map(SidedPoint::exact)
        .collect();
    let mut breaks = kernel.t_breakpoints(s.value);
    breaks.extend([a, b]);
    for p in breaks {
        if p < a || p > b {
            continue;
        }
        if p == s.value {
            pts.push(s.below());
            pts.push(s.above());
            continue;
        }
        pts.push(SidedPoint::exact(p));
        if p > a {
            pts.push(SidedPoint::minus(p));
        }
        if p < b {
            pts.push(SidedPoint::plus(p));
        }
    }
    pts
}

/// All `(t, s)` pairs of `set`.
pub fn candidate_points(
    kernel: &dyn Kernel,
    set: CandidateSet,
    density: usize,
) -> Vec<(SidedPoint, SidedPoint)> {
    let (a, b) = kernel.domain();
    let mut out = Vec::new();
    let sided = sided_integers(kernel);
    if set.diagonal_at_integers {
        out.push((SidedPoint::exact(a), SidedPoint::plus(a)));
        out.extend(sided.iter().map(|&s| (s.below(), s)));
    }
    if set.diagonal_grid {
        let breaks = kernel.layout().breakpoints();
        for s in uniform(a, b, density) {
            if s > a && s < b && !breaks.contains(&s) {
                let s = SidedPoint::exact(s);
                out.push((s.below(), s));
            }
        }
    }
    if set.integer_columns {
        for &s in &sided {
            out.extend(
                column_points(kernel, s, density)
                    .into_iter()
                    .map(|t| (t, s)),
            );
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimumReport {
    pub value: f64,
    pub t: SidedPoint,
    pub s: SidedPoint,
}

/// Minimum of the kernel over the candidate set.
pub fn min_scan_minimum(
    kernel: &dyn Kernel,
    set: CandidateSet,
    density: usize,
) -> Result<MinimumReport> {
    let mut best: Option<MinimumReport> = None;
    for (t, s) in candidate_points(kernel, set, density) {
        let value = kernel.eval(t, s)?;
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("kernel at ({t}, {s})")));
        }
        if best.is_none_or(|b| value < b.value) {
            best = Some(MinimumReport { value, t, s });
        }
    }
    best.ok_or_else(|| Error::Domain("empty candidate set".into()))
}

/// Numerator `G(t,s)` and denominator `Σ_i H(l_i, s) ∫_{C_i} G(t,r) dr` of
/// the fixed-point operator, so that `H(t,s) = numerator − M·denominator`.
pub fn fixed_point_parts(k: &AssembledKernel, t: SidedPoint, s: SidedPoint) -> Result<(f64, f64)> {
    let numer = k.base().eval(t, s)?;
    let ints = k.cell_integrals(t.value)?;
    let mut denom = 0.0;
    let mut scale = 0.0;
    for (&label, int) in k.cell_layout().labels.iter().zip(&ints) {
        let term = k.eval(SidedPoint::exact(label as f64), s)? * int;
        denom += term;
        scale += term.abs();
    }
    if denom.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::ZeroDenominator {
            t: t.value,
            s: s.value,
        });
    }
    Ok((numer, denom))
}

/// `T⁰(M, t, s) = G(t, s) / Σ_i H_{m,M}(l_i, s) ∫_{C_i} G(t, r) dr`. A value
/// `M` is a fixed point exactly where `H_{m,M}(t, s) = 0`.
pub fn fixed_point_operator(k: &AssembledKernel, t: SidedPoint, s: SidedPoint) -> Result<f64> {
    let (n, d) = fixed_point_parts(k, t, s)?;
    Ok(n / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    /// `min sign(D)·(T⁰ − M)` over the candidates; positive iff the kernel is
    /// positive on all of them.
    pub margin: f64,
    pub t: SidedPoint,
    pub s: SidedPoint,
    /// Largest operator value among candidates with negative denominator.
    pub max_below: Option<f64>,
    /// Smallest operator value among candidates with positive denominator.
    pub min_above: Option<f64>,
}

pub fn fixed_point_scan(
    k: &AssembledKernel,
    set: CandidateSet,
    density: usize,
) -> Result<FixedPointReport> {
    let big_m = k.params().big_m;
    let mut report: Option<FixedPointReport> = None;
    let (mut max_below, mut min_above) = (None::<f64>, None::<f64>);
    for (t, s) in candidate_points(k, set, density) {
        let (n, d) = fixed_point_parts(k, t, s)?;
        let op = n / d;
        if !op.is_finite() {
            return Err(Error::NonFinite(format!(
                "fixed-point operator at ({t}, {s})"
            )));
        }
        let margin = d.signum() * (op - big_m);
        if d < 0.0 {
            max_below = Some(max_below.map_or(op, |v| v.max(op)));
        } else {
            min_above = Some(min_above.map_or(op, |v| v.min(op)));
        }
        if report.is_none_or(|r| margin < r.margin) {
            report = Some(FixedPointReport {
                margin,
                t,
                s,
                max_below: None,
                min_above: None,
            });
        }
    }
    let mut r = report.ok_or_else(|| Error::Domain("empty candidate set".into()))?;
    r.max_below = max_below;
    r.min_above = min_above;
    Ok(r)
}

/// Upper end of the positive band `(−m, M₀)` located by bisection on the
/// sign of the fixed-point margin over the full candidate set.
pub fn fixed_point_boundary(
    family: Family,
    m: f64,
    horizon: f64,
    cfg: &ScanCfg,
    tol: f64,
) -> Result<f64> {
    let base = match family {
        Family::Ode => KernelKind::OdeExp,
        Family::Reflection => KernelKind::ReflectionFirstOrder,
    };
    let margin = |big_m: f64| -> Result<f64> {
        let k = assemble(
            ProblemParams::new(m, big_m, horizon)?,
            base,
            &cfg.quadrature,
        )?;
        Ok(fixed_point_scan(&k, CandidateSet::FULL, cfg.density)?.margin)
    };
    let mut lo = -m + 1e-3 * m.abs().max(1.0);
    if margin(lo)? <= 0.0 {
        return Err(Error::Domain(format!(
            "no positive band above the eigenline at m = {m}"
        )));
    }
    let mut step = 0.25 * m.abs().max(1.0);
    let mut hi = lo + step;
    let mut expansions = 0;
    while margin(hi)? > 0.0 {
        lo = hi;
        step *= 2.0;
        hi += step;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::Domain(format!(
                "positive band at m = {m} appears unbounded"
            )));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if margin(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
