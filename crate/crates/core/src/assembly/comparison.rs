use crate::closed_form::Kernel;
use crate::error::{Error, Result};
use crate::params::{KernelKind, ProblemParams};
use crate::quadrature::{integrate, QuadratureCfg};
use crate::sided::SidedPoint;

use super::assemble;

/// Residual of the comparison identity between two kernels of the same
/// family and horizon:
///
/// `K₀(t,s) − K₁(t,s) − (m₁−m₀) ∫ K₁(t,r) K₀(ι r, s) dr
///   − (M₁−M₀) ∫ K₁(t,r) K₀([r], s) dr`.
pub fn comparison_residual(
    k0: &dyn Kernel,
    k1: &dyn Kernel,
    t: f64,
    s: SidedPoint,
    q: &QuadratureCfg,
) -> Result<f64> {
    let (p0, p1) = (k0.params(), k1.params());
    if k0.family() != k1.family() || p0.horizon != p1.horizon {
        return Err(Error::Domain(
            "comparison needs kernels of one family and horizon".into(),
        ));
    }
    let family = k0.family();
    let (a, b) = k0.domain();
    let t_pt = SidedPoint::exact(t);

    let mut breaks = k1.s_breakpoints(t);
    breaks.extend(
        k0.t_breakpoints(s.value)
            .into_iter()
            .map(|x| family.involution(SidedPoint::exact(x)).value),
    );
    let mut err = None;
    let mut record = |r: Result<f64>| {
        r.unwrap_or_else(|e| {
            err.get_or_insert(e);
            f64::NAN
        })
    };
    let m_term = integrate(
        |r| {
            let r_pt = SidedPoint::exact(r);
            let v = k1
                .eval(t_pt, r_pt)
                .and_then(|h1| Ok(h1 * k0.eval(family.involution(r_pt), s)?));
            record(v)
        },
        a,
        b,
        &breaks,
        q,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let m_term = m_term?;

    let layout = k0.layout();
    let mut big_m_term = 0.0;
    for (&label, &(lo, hi)) in layout.labels.iter().zip(&layout.cells) {
        big_m_term += k0.eval(SidedPoint::exact(label as f64), s)? * k1.integrate_s(t, lo, hi)?;
    }
    Ok(k0.eval(t_pt, s)?
        - k1.eval(t_pt, s)?
        - (p1.m - p0.m) * m_term
        - (p1.big_m - p0.big_m) * big_m_term)
}

/// [`comparison_residual`] for two reflection kernels.
pub fn lloro_residual(
    p0: ProblemParams,
    p1: ProblemParams,
    t: f64,
    s: SidedPoint,
    q: &QuadratureCfg,
) -> Result<f64> {
    let k0 = assemble(p0, KernelKind::ReflectionFirstOrder, q)?;
    let k1 = assemble(p1, KernelKind::ReflectionFirstOrder, q)?;
    comparison_residual(&k0, &k1, t, s, q)
}
