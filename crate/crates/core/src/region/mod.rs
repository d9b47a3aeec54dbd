//! Classification of `(m, M)` by the sign of the Green's function.

mod boundary;
mod grid;
mod scan;

pub use boundary::{
    boundary_polylines, closed_form_class, ode_region_boundary, reflection_region_boundary_small_t,
    Polyline, SignBand,
};
pub use grid::{linspace, sweep_region, RegionGrid};
pub use scan::{
    candidate_points, fixed_point_boundary, fixed_point_operator, fixed_point_parts,
    fixed_point_scan, min_scan_minimum, CandidateSet, FixedPointReport, MinimumReport, ScanCfg,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assembly::assemble;
use crate::closed_form::{q_bar, Kernel, OdePiecewiseSmallT, ReflectionPiecewiseSmallT};
use crate::error::{Error, Result};
use crate::params::{on_eigenline, Family, KernelKind, ProblemParams};
use crate::quadrature::QuadratureCfg;
use crate::sided::SidedPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignClass {
    Positive,
    Negative,
    SignChanging,
    Singular,
    Undetermined,
}

impl SignClass {
    pub const ALL: [SignClass; 5] = [
        SignClass::Positive,
        SignClass::Negative,
        SignClass::SignChanging,
        SignClass::Singular,
        SignClass::Undetermined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SignClass::Positive => "positive",
            SignClass::Negative => "negative",
            SignClass::SignChanging => "sign-changing",
            SignClass::Singular => "singular",
            SignClass::Undetermined => "undetermined",
        }
    }

    /// Compact code used in JSON grids.
    pub fn code(self) -> u8 {
        match self {
            SignClass::Positive => 1,
            SignClass::Negative => 2,
            SignClass::SignChanging => 3,
            SignClass::Singular => 4,
            SignClass::Undetermined => 0,
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    ClosedFormOde,
    ClosedFormReflectionSmallT,
    MinScan,
    FixedPointScan,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::ClosedFormOde => "closed-form-ode",
            Strategy::ClosedFormReflectionSmallT => "closed-form-reflection",
            Strategy::MinScan => "min-scan",
            Strategy::FixedPointScan => "fixed-point",
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" | "closed-form-reflection" => Ok(Strategy::ClosedFormReflectionSmallT),
            "closed-form-ode" => Ok(Strategy::ClosedFormOde),
            "min-scan" => Ok(Strategy::MinScan),
            "fixed-point" => Ok(Strategy::FixedPointScan),
            _ => Err(Error::Domain(format!("unknown strategy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub family: Family,
    /// `None` picks per point: closed forms for `T ≤ 1`, otherwise the
    /// scan proven sufficient for the signs of `m` and `M`.
    pub strategy: Option<Strategy>,
    pub scan: ScanCfg,
}

impl ClassifyOptions {
    pub fn new(family: Family) -> Self {
        ClassifyOptions {
            family,
            strategy: None,
            scan: ScanCfg::default(),
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = Some(strategy);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: SignClass,
    pub strategy: Option<Strategy>,
}

impl Classification {
    fn of(class: SignClass, strategy: Option<Strategy>) -> Self {
        Classification { class, strategy }
    }
}

/// Classification of the reflection kernel with automatic strategy.
pub fn classify_point(m: f64, big_m: f64, horizon: f64, q: &QuadratureCfg) -> SignClass {
    let mut opts = ClassifyOptions::new(Family::Reflection);
    opts.scan.quadrature = *q;
    classify(m, big_m, horizon, &opts).class
}

pub fn classify(m: f64, big_m: f64, horizon: f64, opts: &ClassifyOptions) -> Classification {
    if ProblemParams::new(m, big_m, horizon).is_err() {
        return Classification::of(SignClass::Undetermined, None);
    }
    if on_eigenline(m, big_m) {
        return Classification::of(SignClass::Singular, None);
    }
    let small = horizon <= 1.0;
    let strategy = match (opts.strategy, opts.family) {
        (Some(s), _) => s,
        (None, Family::Ode) if small => Strategy::ClosedFormOde,
        (None, Family::Reflection) if small => Strategy::ClosedFormReflectionSmallT,
        (None, _) => return classify_auto(m, big_m, horizon, opts),
    };
    match strategy {
        Strategy::ClosedFormOde | Strategy::ClosedFormReflectionSmallT => {
            let family = if strategy == Strategy::ClosedFormOde {
                Family::Ode
            } else {
                Family::Reflection
            };
            let class =
                closed_form_class(family, m, big_m, horizon).unwrap_or(SignClass::Undetermined);
            Classification::of(class, Some(strategy))
        }
        Strategy::MinScan | Strategy::FixedPointScan => {
            let class = by_symmetry(m, big_m, |m, big_m| {
                positive_by(strategy, m, big_m, horizon, opts)
            });
            Classification::of(class, Some(strategy))
        }
    }
}

/// Decides the sign through `positive(m, M)` alone: the kernel is negative
/// for `(m, M)` exactly when it is positive for `(−m, −M)`, and positivity
/// needs `m + M > 0`.
fn by_symmetry(m: f64, big_m: f64, positive: impl Fn(f64, f64) -> Result<bool>) -> SignClass {
    let (pm, pbig, class) = if m + big_m > 0.0 {
        (m, big_m, SignClass::Positive)
    } else {
        (-m, -big_m, SignClass::Negative)
    };
    match positive(pm, pbig) {
        Ok(true) => class,
        Ok(false) => SignClass::SignChanging,
        Err(Error::SingularParameter(_) | Error::SingularMatrix { .. }) => SignClass::Singular,
        Err(_) => SignClass::Undetermined,
    }
}

/// The kernel used by scans: closed form when `T ≤ 1`, assembled otherwise.
pub fn scan_kernel(
    family: Family,
    params: ProblemParams,
    q: &QuadratureCfg,
) -> Result<Box<dyn Kernel>> {
    Ok(match family {
        Family::Ode if params.horizon <= 1.0 => Box::new(OdePiecewiseSmallT::new(params)?),
        Family::Reflection if params.horizon <= 1.0 => {
            Box::new(ReflectionPiecewiseSmallT::new(params)?)
        }
        Family::Ode => Box::new(assemble(params, KernelKind::OdeExp, q)?),
        Family::Reflection => Box::new(assemble(params, KernelKind::ReflectionFirstOrder, q)?),
    })
}

fn base_kind(family: Family) -> KernelKind {
    match family {
        Family::Ode => KernelKind::OdeExp,
        Family::Reflection => KernelKind::ReflectionFirstOrder,
    }
}

fn positive_by(
    strategy: Strategy,
    m: f64,
    big_m: f64,
    horizon: f64,
    opts: &ClassifyOptions,
) -> Result<bool> {
    let params = ProblemParams::new(m, big_m, horizon)?;
    let q = &opts.scan.quadrature;
    let density = opts.scan.density;
    match strategy {
        Strategy::FixedPointScan => {
            let k = assemble(params, base_kind(opts.family), q)?;
            match fixed_point_scan(&k, CandidateSet::FULL, density) {
                Ok(r) => Ok(r.margin > 0.0),
                Err(Error::ZeroDenominator { .. }) => {
                    Ok(min_scan_minimum(&k, CandidateSet::FULL, density)?.value > 0.0)
                }
                Err(e) => Err(e),
            }
        }
        _ => {
            let k = scan_kernel(opts.family, params, q)?;
            Ok(min_scan_minimum(k.as_ref(), CandidateSet::FULL, density)?.value > 0.0)
        }
    }
}

/// `T > 1`: per-case candidate sets. With `m > 0, M > 0` the minimum lies
/// on the diagonal at an integer or an end; with `m < 0, M > 0` it lies in a
/// column `s = n±` and is found through the fixed-point operator; with
/// `m > 0, M < 0` both are checked.
fn classify_auto(m: f64, big_m: f64, horizon: f64, opts: &ClassifyOptions) -> Classification {
    let q = opts.scan.quadrature;
    let density = opts.scan.density;
    let family = opts.family;
    let strategy = |m: f64, big_m: f64| {
        if m > 0.0 && big_m > 0.0 {
            Strategy::MinScan
        } else {
            Strategy::FixedPointScan
        }
    };
    let positive = |m: f64, big_m: f64| -> Result<bool> {
        let k = assemble(
            ProblemParams::new(m, big_m, horizon)?,
            base_kind(family),
            &q,
        )?;
        let diagonal_ok = || -> Result<bool> {
            Ok(min_scan_minimum(&k, CandidateSet::DIAGONAL, density)?.value > 0.0)
        };
        let columns_ok = || -> Result<bool> {
            match fixed_point_scan(&k, CandidateSet::COLUMNS, density) {
                Ok(r) => Ok(r.margin > 0.0),
                Err(Error::ZeroDenominator { .. }) => {
                    Ok(min_scan_minimum(&k, CandidateSet::FULL, density)?.value > 0.0)
                }
                Err(e) => Err(e),
            }
        };
        if big_m == 0.0 {
            return Ok(min_scan_minimum(&k, CandidateSet::FULL, density)?.value > 0.0);
        }
        match (m > 0.0, big_m > 0.0) {
            (true, true) => diagonal_ok(),
            (false, true) => columns_ok(),
            (true, false) => Ok(columns_ok()? && diagonal_ok()?),
            (false, false) => Ok(false),
        }
    };
    let (pm, pbig) = if m + big_m > 0.0 {
        (m, big_m)
    } else {
        (-m, -big_m)
    };
    let class = by_symmetry(m, big_m, positive);
    Classification::of(class, Some(strategy(pm, pbig)))
}

/// Minimum over the full candidate set compared with the conjectured
/// location `q(0⁻)` (`M > 0`) or `q(0⁺)` (`M < 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureAudit {
    pub m: f64,
    pub big_m: f64,
    pub minimum: MinimumReport,
    pub conjectured: f64,
}

impl ConjectureAudit {
    pub fn agrees(&self, tol: f64) -> bool {
        (self.minimum.value - self.conjectured).abs() <= tol
    }
}

pub fn audit_minimum_location(params: ProblemParams, cfg: &ScanCfg) -> Result<ConjectureAudit> {
    let k = scan_kernel(Family::Reflection, params, &cfg.quadrature)?;
    let minimum = min_scan_minimum(k.as_ref(), CandidateSet::FULL, cfg.density)?;
    let origin = if params.big_m > 0.0 {
        SidedPoint::minus(0.0)
    } else {
        SidedPoint::plus(0.0)
    };
    let conjectured = q_bar(k.as_ref(), origin)?;
    Ok(ConjectureAudit {
        m: params.m,
        big_m: params.big_m,
        minimum,
        conjectured,
    })
}
