//! Randomised checks of the identities every reflection kernel satisfies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assembly::{
    assemble, assemble_matrix, comparison_residual, det_a, singularity_scale, AssembledKernel,
};
use crate::closed_form::{Kernel, ReflectionGreen, ReflectionPiecewiseSmallT};
use crate::error::Result;
use crate::params::{KernelKind, ProblemParams};
use crate::quadrature::{integrate, QuadratureCfg};
use crate::sided::SidedPoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Largest deviation seen.
    pub worst: f64,
    pub tol: f64,
}

impl CheckResult {
    fn new(name: &str, worst: f64, tol: f64) -> Self {
        CheckResult {
            name: name.into(),
            passed: worst <= tol,
            worst,
            tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteCfg {
    pub seed: u64,
    pub samples: usize,
    pub fd_step: f64,
    pub quadrature: QuadratureCfg,
}

impl Default for SuiteCfg {
    fn default() -> Self {
        SuiteCfg {
            seed: 7,
            samples: 40,
            fd_step: 1e-5,
            quadrature: QuadratureCfg::default(),
        }
    }
}

/// Uniform point of `(−T, T)` at least `gap` away from every value in
/// `avoid` and from the integers.
pub fn sample_away<R: Rng>(rng: &mut R, horizon: f64, avoid: &[f64], gap: f64) -> f64 {
    loop {
        let x = rng.gen_range(-horizon..horizon);
        let near_int = (x - x.round()).abs() < gap;
        let near_avoid = avoid.iter().any(|a| (x - a).abs() < gap);
        let near_end = horizon - x.abs() < gap;
        if !near_int && !near_avoid && !near_end {
            return x;
        }
    }
}

fn pt(x: f64) -> SidedPoint {
    SidedPoint::exact(x)
}

/// Runs every check at `params` (reflection family).
pub fn run_suite(params: ProblemParams, cfg: &SuiteCfg) -> Result<Vec<CheckResult>> {
    let q = &cfg.quadrature;
    let k = assemble(params, KernelKind::ReflectionFirstOrder, q)?;
    let mirror = assemble(params.negated(), KernelKind::ReflectionFirstOrder, q)?;
    let base = ReflectionGreen::new(params.m, params.horizon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let tt = params.horizon;
    let ProblemParams { m, big_m, .. } = params;
    let mut out = Vec::new();

    let mut pairs = Vec::new();
    for _ in 0..cfg.samples {
        let s = sample_away(&mut rng, tt, &[], 1e-3);
        let t = sample_away(&mut rng, tt, &[s, -s], 1e-3);
        pairs.push((t, s));
    }

    let mut worst = 0f64;
    for &(t, _) in &pairs {
        let p = pt(t);
        worst = worst.max((k.eval(p.above(), p)? - k.eval(p.below(), p)? - 1.0).abs());
        worst = worst.max((k.eval(p, p.below())? - k.eval(p, p.above())? - 1.0).abs());
    }
    out.push(CheckResult::new("unit jump on the diagonal", worst, 1e-9));

    out.push(CheckResult::new(
        "jump at integer labels",
        label_jump_error(&k)?,
        1e-9,
    ));

    let mut worst = 0f64;
    for &(t, s) in &pairs {
        worst = worst.max((k.eval(pt(t), pt(s))? + mirror.eval(pt(-t), pt(-s))?).abs());
    }
    out.push(CheckResult::new(
        "symmetry under (t,s,m,M) -> (-t,-s,-m,-M)",
        worst,
        1e-8,
    ));

    let h = cfg.fd_step;
    let layout = k.cell_layout().clone();
    let mut worst = 0f64;
    for &(t, s) in &pairs {
        let dt = (k.eval(pt(t + h), pt(s))? - k.eval(pt(t - h), pt(s))?) / (2.0 * h);
        let label = layout.label_of(pt(t)) as f64;
        let r = dt + m * k.eval(pt(-t), pt(s))? + big_m * k.eval(pt(label), pt(s))?;
        worst = worst.max(r.abs());
    }
    out.push(CheckResult::new("defining equation residual", worst, 1e-4));

    let mut worst = 0f64;
    for &(t, s) in pairs.iter().take(10) {
        let ds = (base.eval(pt(t), pt(s + h))? - base.eval(pt(t), pt(s - h))?) / (2.0 * h);
        worst = worst.max((ds - m * base.eval(pt(t), pt(-s))?).abs());
    }
    out.push(CheckResult::new(
        "s-derivative of the reflection kernel",
        worst,
        1e-4,
    ));

    let mut worst = 0f64;
    for &(_, s) in &pairs {
        worst = worst.max((k.eval(pt(-tt), pt(s))? - k.eval(pt(tt), pt(s))?).abs());
    }
    out.push(CheckResult::new("periodicity in t", worst, 1e-9));

    let mut worst = 0f64;
    for &(t, _) in pairs.iter().take(10) {
        let mut breaks = k.s_breakpoints(t);
        breaks.push(-t);
        let int_h = integrate(
            |r| k.eval(pt(t), pt(r)).unwrap_or(f64::NAN),
            -tt,
            tt,
            &breaks,
            q,
        )?;
        let int_g = integrate(
            |r| base.eval(pt(t), pt(r)).unwrap_or(f64::NAN),
            -tt,
            tt,
            &breaks,
            q,
        )?;
        worst = worst
            .max((int_h - 1.0 / (m + big_m)).abs())
            .max((int_g - 1.0 / m).abs());
    }
    out.push(CheckResult::new(
        "normalisation of the integrals in s",
        worst,
        1e-9,
    ));

    let det = det_a(params, q)?;
    let det_mirror = det_a(params.negated(), q)?;
    out.push(CheckResult::new(
        "det A(m,M) = det A(-m,-M) (relative)",
        (det - det_mirror).abs() / det.abs().max(f64::MIN_POSITIVE),
        1e-9,
    ));
    let eigen = params.with_big_m(-m);
    let (_, a) = assemble_matrix(eigen, k.base(), q)?;
    let det_eigen = a.clone().lu().determinant();
    out.push(CheckResult::new(
        "det A vanishes on m + M = 0 (relative)",
        det_eigen.abs() / singularity_scale(&a),
        1e-8,
    ));

    let p1 = ProblemParams {
        m: m + 0.05,
        big_m: big_m + 0.03,
        horizon: tt,
    };
    let mut worst = 0f64;
    if let Ok(k1) = assemble(p1, KernelKind::ReflectionFirstOrder, q) {
        for &(t, s) in pairs.iter().take(5) {
            worst = worst.max(comparison_residual(&k, &k1, t, pt(s), q)?.abs());
        }
    }
    out.push(CheckResult::new(
        "comparison identity between two kernels",
        worst,
        1e-7,
    ));

    if tt <= 1.0 {
        let closed = ReflectionPiecewiseSmallT::new(params)?;
        let mut worst = 0f64;
        for &(t, s) in &pairs {
            worst = worst.max((closed.eval(pt(t), pt(s))? - k.eval(pt(t), pt(s))?).abs());
        }
        out.push(CheckResult::new(
            "assembled kernel matches the closed form",
            worst,
            1e-10,
        ));
    }
    Ok(out)
}

/// Worst deviation of `H(j, j⁻) − H(j, j⁺)` from
/// `1 − M Σ_i Ã_{i j} ∫_{C_i} Ḡ(j, r) dr` over the labels `j`.
pub fn label_jump_error(k: &AssembledKernel) -> Result<f64> {
    let big_m = k.params().big_m;
    let layout = k.cell_layout();
    let mut worst = 0f64;
    for (j, &label) in layout.labels.iter().enumerate() {
        let l = pt(label as f64);
        let jump = k.eval(l, l.below())? - k.eval(l, l.above())?;
        let ints = k.cell_integrals(l.value)?;
        let expected = 1.0
            - big_m
                * (0..layout.len())
                    .map(|i| k.inverse()[(i, j)] * ints[i])
                    .sum::<f64>();
        worst = worst.max((jump - expected).abs());
    }
    Ok(worst)
}
