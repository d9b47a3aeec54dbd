//! Closed-form Green's functions and their exact integrals.

mod ode;
mod reflection;

pub use ode::{g_ode_exp, h_ode_piecewise_small_t, OdeGreen, OdePiecewiseSmallT};
pub use reflection::{
    g_reflection, g_reflection_second_order, h_reflection_small_t, integral_g_reflection,
    ReflectionGreen, ReflectionPiecewiseSmallT, SecondOrderGreen,
};

use crate::assembly::CellLayout;
use crate::error::Result;
use crate::params::{Family, ProblemParams};
use crate::sided::SidedPoint;

/// A Green's function `K(t, s)` of one of the periodic first-order problems.
pub trait Kernel: Send + Sync {
    fn params(&self) -> ProblemParams;

    fn family(&self) -> Family;

    /// `K(t, s)`. Points on a jump line must carry a side, otherwise
    /// [`crate::Error::AmbiguousSide`] is returned.
    fn eval(&self, t: SidedPoint, s: SidedPoint) -> Result<f64>;

    /// `∫_a^b K(t, r) dr`.
    fn integrate_s(&self, t: f64, a: f64, b: f64) -> Result<f64>;

    fn domain(&self) -> (f64, f64) {
        self.family().domain(self.params().horizon)
    }

    fn layout(&self) -> CellLayout {
        CellLayout::for_family(self.family(), self.params().horizon)
    }

    /// Points where `K(t, ·)` may fail to be smooth.
    fn s_breakpoints(&self, t: f64) -> Vec<f64> {
        let mut pts = vec![t];
        if self.family() == Family::Reflection {
            pts.push(-t);
        }
        pts.extend(self.layout().breakpoints());
        pts
    }

    /// Points where `K(·, s)` may fail to be smooth.
    fn t_breakpoints(&self, s: f64) -> Vec<f64> {
        self.s_breakpoints(s)
    }
}

/// The diagonal limit `q(s) = K(s⁻, s)`; at the left end of the domain it
/// is `K(a, a⁺)`.
pub fn q_bar(kernel: &dyn Kernel, s: SidedPoint) -> Result<f64> {
    let (a, _) = kernel.domain();
    if s.is_exact() && s.value == a {
        return kernel.eval(s, SidedPoint::plus(a));
    }
    kernel.eval(s.below(), s)
}

pub(crate) fn check_points(t: &SidedPoint, s: &SidedPoint) -> Result<()> {
    t.check_finite()?;
    s.check_finite()
}
