//! Green's function of the piecewise-constant problem for arbitrary `T`.
//!
//! With `G` the kernel of `v' + m v(ι t) = h` (ι the identity or the
//! reflection) and cells `C_i` labelled by the value `l_i` of `[t]`,
//!
//! `H(t, s) = G(t, s) − M Σ_i Σ_j Ã_ij G(l_j, s) ∫_{C_i} G(t, r) dr`,
//!
//! where `Ã = A⁻¹` and `A_ij = δ_ij + M ∫_{C_j} G(l_i, r) dr`.

mod comparison;
mod layout;

pub use comparison::{comparison_residual, lloro_residual};
pub use layout::{build_layout, CellLayout};

use nalgebra::DMatrix;

use crate::closed_form::{
    Kernel, OdeGreen, OdePiecewiseSmallT, ReflectionGreen, ReflectionPiecewiseSmallT,
    SecondOrderGreen,
};
use crate::error::{Error, Result};
use crate::params::{Family, KernelKind, ProblemParams};
use crate::quadrature::{integrate, QuadMode, QuadratureCfg};
use crate::sided::SidedPoint;

/// Kernel without the piecewise-constant term.
#[derive(Debug, Clone, Copy)]
pub enum BaseKernel {
    Ode(OdeGreen),
    Reflection(ReflectionGreen),
}

impl BaseKernel {
    pub fn new(kind: KernelKind, m: f64, horizon: f64) -> Result<Self> {
        match kind {
            KernelKind::OdeExp => Ok(BaseKernel::Ode(OdeGreen::new(m, horizon)?)),
            KernelKind::ReflectionFirstOrder => {
                Ok(BaseKernel::Reflection(ReflectionGreen::new(m, horizon)?))
            }
            other => Err(Error::Unsupported(format!(
                "`{other}` cannot serve as the base of an assembly"
            ))),
        }
    }

    pub fn for_family(family: Family, m: f64, horizon: f64) -> Result<Self> {
        match family {
            Family::Ode => Self::new(KernelKind::OdeExp, m, horizon),
            Family::Reflection => Self::new(KernelKind::ReflectionFirstOrder, m, horizon),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            BaseKernel::Ode(_) => Family::Ode,
            BaseKernel::Reflection(_) => Family::Reflection,
        }
    }

    pub fn as_kernel(&self) -> &dyn Kernel {
        match self {
            BaseKernel::Ode(k) => k,
            BaseKernel::Reflection(k) => k,
        }
    }

    pub fn eval(&self, t: SidedPoint, s: SidedPoint) -> Result<f64> {
        self.as_kernel().eval(t, s)
    }

    /// `∫_a^b G(t, r) dr`, analytically or by adaptive quadrature.
    pub fn integral(&self, t: f64, a: f64, b: f64, q: &QuadratureCfg) -> Result<f64> {
        match q.mode {
            QuadMode::AnalyticPreferred => self.as_kernel().integrate_s(t, a, b),
            QuadMode::AdaptiveOnly => {
                let k = self.as_kernel();
                let mut err = None;
                let v = integrate(
                    |r| {
                        k.eval(SidedPoint::exact(t), SidedPoint::exact(r))
                            .unwrap_or_else(|e| {
                                err = Some(e);
                                f64::NAN
                            })
                    },
                    a,
                    b,
                    &[t, -t],
                    q,
                );
                match err {
                    Some(e) => Err(e),
                    None => v,
                }
            }
        }
    }
}

/// `H` for arbitrary horizon, built from a base kernel and the cell matrix.
#[derive(Debug, Clone)]
pub struct AssembledKernel {
    params: ProblemParams,
    base: BaseKernel,
    layout: CellLayout,
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    det: f64,
    quad: QuadratureCfg,
}

/// The cell matrix `A` and the layout it was built on.
pub fn assemble_matrix(
    params: ProblemParams,
    base: &BaseKernel,
    q: &QuadratureCfg,
) -> Result<(CellLayout, DMatrix<f64>)> {
    let layout = CellLayout::for_family(base.family(), params.horizon);
    let n = layout.len();
    let mut a = DMatrix::<f64>::identity(n, n);
    for (i, &label) in layout.labels.iter().enumerate() {
        for (j, &(lo, hi)) in layout.cells.iter().enumerate() {
            a[(i, j)] += params.big_m * base.integral(label as f64, lo, hi, q)?;
        }
    }
    Ok((layout, a))
}

/// Scale against which `det A` is judged: `∏_i (1 + ‖row_i(A − I)‖)`.
/// Row norms of `A` itself would hide the cancellation `1 + M a ≈ 0`, which
/// is exactly what singularity means for a single cell.
pub fn singularity_scale(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    (a - DMatrix::<f64>::identity(n, n))
        .row_iter()
        .map(|r| 1.0 + r.norm())
        .product()
}

fn determinant(a: &DMatrix<f64>) -> f64 {
    a.clone().lu().determinant()
}

/// `det A(m, M)` for the reflection problem. Returned even when `A` is
/// singular.
pub fn det_a(params: ProblemParams, q: &QuadratureCfg) -> Result<f64> {
    let base = BaseKernel::new(KernelKind::ReflectionFirstOrder, params.m, params.horizon)?;
    let (_, a) = assemble_matrix(params, &base, q)?;
    Ok(determinant(&a))
}

pub fn assemble(
    params: ProblemParams,
    base: KernelKind,
    q: &QuadratureCfg,
) -> Result<AssembledKernel> {
    let ProblemParams { m, big_m, horizon } =
        ProblemParams::new(params.m, params.big_m, params.horizon)?;
    let base = BaseKernel::new(base, m, horizon)?;
    let (layout, matrix) = assemble_matrix(params, &base, q)?;
    let det = determinant(&matrix);
    if !det.is_finite() || det.abs() < 1e-8 * singularity_scale(&matrix) {
        return Err(Error::SingularMatrix { det, m, big_m });
    }
    let inverse = matrix
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::SingularMatrix { det, m, big_m })?;
    Ok(AssembledKernel {
        params,
        base,
        layout,
        matrix,
        inverse,
        det,
        quad: *q,
    })
}

/// The kernel named by `kind`: closed forms where they exist, the
/// assembled kernel for piecewise problems with `T > 1`. Base kernels
/// ignore `M`.
pub fn kernel_for(
    kind: KernelKind,
    params: ProblemParams,
    q: &QuadratureCfg,
) -> Result<Box<dyn Kernel>> {
    let ProblemParams { m, horizon, .. } =
        ProblemParams::new(params.m, params.big_m, params.horizon)?;
    Ok(match kind {
        KernelKind::OdeExp => Box::new(OdeGreen::new(m, horizon)?),
        KernelKind::ReflectionFirstOrder => Box::new(ReflectionGreen::new(m, horizon)?),
        KernelKind::ReflectionSecondOrder => Box::new(SecondOrderGreen::new(m, horizon)?),
        KernelKind::OdePiecewise if horizon <= 1.0 => Box::new(OdePiecewiseSmallT::new(params)?),
        KernelKind::ReflectionPiecewise if horizon <= 1.0 => {
            Box::new(ReflectionPiecewiseSmallT::new(params)?)
        }
        KernelKind::OdePiecewise => Box::new(assemble(params, KernelKind::OdeExp, q)?),
        KernelKind::ReflectionPiecewise => {
            Box::new(assemble(params, KernelKind::ReflectionFirstOrder, q)?)
        }
    })
}

impl AssembledKernel {
    pub fn base(&self) -> &BaseKernel {
        &self.base
    }

    pub fn cell_layout(&self) -> &CellLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn quadrature(&self) -> &QuadratureCfg {
        &self.quad
    }

    /// `∫_{C_i} G(t, r) dr` for every cell.
    pub fn cell_integrals(&self, t: f64) -> Result<Vec<f64>> {
        self.layout
            .cells
            .iter()
            .map(|&(lo, hi)| self.base.integral(t, lo, hi, &self.quad))
            .collect()
    }

    /// `Σ_j Ã_ij G(l_j, s)` for every cell `i`.
    pub fn label_weights(&self, s: SidedPoint) -> Result<Vec<f64>> {
        let g: Vec<f64> = self
            .layout
            .labels
            .iter()
            .map(|&l| self.base.eval(SidedPoint::exact(l as f64), s))
            .collect::<Result<_>>()?;
        Ok((0..self.layout.len())
            .map(|i| (0..g.len()).map(|j| self.inverse[(i, j)] * g[j]).sum())
            .collect())
    }

    /// `H(t, s)` from precomputed [`Self::cell_integrals`] at `t` and
    /// [`Self::label_weights`] at `s`.
    pub fn eval_parts(
        &self,
        t: SidedPoint,
        s: SidedPoint,
        cell_ints: &[f64],
        weights: &[f64],
    ) -> Result<f64> {
        let coupling: f64 = cell_ints.iter().zip(weights).map(|(i, w)| i * w).sum();
        Ok(self.base.eval(t, s)? - self.params.big_m * coupling)
    }
}

impl Kernel for AssembledKernel {
    fn params(&self) -> ProblemParams {
        self.params
    }

    fn family(&self) -> Family {
        self.base.family()
    }

    fn eval(&self, t: SidedPoint, s: SidedPoint) -> Result<f64> {
        let ints = self.cell_integrals(t.value)?;
        let weights = self.label_weights(s)?;
        self.eval_parts(t, s, &ints, &weights)
    }

    fn integrate_s(&self, t: f64, a: f64, b: f64) -> Result<f64> {
        let ints = self.cell_integrals(t)?;
        let label_ints: Vec<f64> = self
            .layout
            .labels
            .iter()
            .map(|&l| self.base.integral(l as f64, a, b, &self.quad))
            .collect::<Result<_>>()?;
        let mut coupling = 0.0;
        for (i, int_i) in ints.iter().enumerate() {
            let w: f64 = label_ints
                .iter()
                .enumerate()
                .map(|(j, g)| self.inverse[(i, j)] * g)
                .sum();
            coupling += int_i * w;
        }
        Ok(self.base.integral(t, a, b, &self.quad)? - self.params.big_m * coupling)
    }

    fn layout(&self) -> CellLayout {
        self.layout.clone()
    }
}

/// `H̄(t, s)` of the reflection problem for any horizon.
pub fn h_general(
    params: ProblemParams,
    t: SidedPoint,
    s: SidedPoint,
    q: &QuadratureCfg,
) -> Result<f64> {
    assemble(params, KernelKind::ReflectionFirstOrder, q)?.eval(t, s)
}
