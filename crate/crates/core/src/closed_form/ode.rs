use crate::error::{Error, Result};
use crate::params::{ode_singular, Family, ProblemParams};
use crate::sided::{diff_sign, SidedPoint};

use super::{check_points, Kernel};

/// Green's function of `v' + m v = h`, `v(0) = v(T)`.
#[derive(Debug, Clone, Copy)]
pub struct OdeGreen {
    m: f64,
    horizon: f64,
    denom: f64,
}

impl OdeGreen {
    pub fn new(m: f64, horizon: f64) -> Result<Self> {
        ProblemParams::new(m, 0.0, horizon)?;
        if let Some(sing) = ode_singular(m, horizon) {
            return Err(Error::SingularParameter(sing));
        }
        Ok(OdeGreen {
            m,
            horizon,
            denom: (m * horizon).exp_m1(),
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    fn shift(&self, below: bool) -> f64 {
        if below {
            self.horizon
        } else {
            0.0
        }
    }

    fn value(&self, t: &SidedPoint, s: &SidedPoint) -> Result<f64> {
        check_points(t, s)?;
        let below = match diff_sign(s, t) {
            Some(sgn) => sgn < 0,
            None => {
                return Err(Error::AmbiguousSide {
                    t: t.value,
                    s: s.value,
                })
            }
        };
        Ok((self.m * (s.value - t.value + self.shift(below))).exp() / self.denom)
    }

    /// `∫_a^b G(t, r) dr` for `a ≤ b`, split at `r = t`.
    fn integral(&self, t: f64, a: f64, b: f64) -> f64 {
        let piece = |lo: f64, hi: f64, below: bool| {
            if hi <= lo {
                return 0.0;
            }
            let start = self.m * (lo - t + self.shift(below));
            start.exp() * (self.m * (hi - lo)).exp_m1() / (self.m * self.denom)
        };
        piece(a, b.min(t), true) + piece(a.max(t), b, false)
    }
}

pub fn g_ode_exp(m: f64, horizon: f64, t: SidedPoint, s: SidedPoint) -> Result<f64> {
    OdeGreen::new(m, horizon)?.value(&t, &s)
}

impl Kernel for OdeGreen {
    fn params(&self) -> ProblemParams {
        ProblemParams {
            m: self.m,
            big_m: 0.0,
            horizon: self.horizon,
        }
    }

    fn family(&self) -> Family {
        Family::Ode
    }

    fn eval(&self, t: SidedPoint, s: SidedPoint) -> Result<f64> {
        self.value(&t, &s)
    }

    fn integrate_s(&self, t: f64, a: f64, b: f64) -> Result<f64> {
        Ok(if a <= b {
            self.integral(t, a, b)
        } else {
            -self.integral(t, b, a)
        })
    }
}

/// Green's function of `v' + m v + M v(0) = h` on `[0, T]`, `T ≤ 1`,
/// including the `m = 0` continuation.
#[derive(Debug, Clone, Copy)]
pub struct OdePiecewiseSmallT {
    params: ProblemParams,
    base: Option<OdeGreen>,
}

impl OdePiecewiseSmallT {
    pub fn new(params: ProblemParams) -> Result<Self> {
        let ProblemParams { m, big_m, horizon } = params;
        ProblemParams::new(m, big_m, horizon)?;
        if horizon > 1.0 {
            return Err(Error::Domain(format!(
                "closed form needs T ≤ 1, got {horizon}"
            )));
        }
        if params.on_eigenline() {
            return Err(Error::SingularParameter(
                crate::error::Singularity::Eigenline,
            ));
        }
        let base = if ode_singular(m, horizon).is_some() {
            None
        } else {
            Some(OdeGreen::new(m, horizon)?)
        };
        Ok(OdePiecewiseSmallT { params, base })
    }
}

pub fn h_ode_piecewise_small_t(params: ProblemParams, t: SidedPoint, s: SidedPoint) -> Result<f64> {
    OdePiecewiseSmallT::new(params)?.eval(t, s)
}

impl Kernel for OdePiecewiseSmallT {
    fn params(&self) -> ProblemParams {
        self.params
    }

    fn family(&self) -> Family {
        Family::Ode
    }

    fn eval(&self, t: SidedPoint, s: SidedPoint) -> Result<f64> {
        check_points(&t, &s)?;
        let ProblemParams { m, big_m, horizon } = self.params;
        match &self.base {
            Some(g) => {
                let origin = SidedPoint::exact(0.0);
                Ok(g.value(&t, &s)? - big_m / (m + big_m) * g.value(&origin, &s)?)
            }
            None => {
                let below = match diff_sign(&s, &t) {
                    Some(sgn) => sgn < 0,
                    None => {
                        return Err(Error::AmbiguousSide {
                            t: t.value,
                            s: s.value,
                        })
                    }
                };
                let jump = if below { big_m * horizon } else { 0.0 };
                Ok((1.0 - big_m * t.value + jump) / (big_m * horizon))
            }
        }
    }

    fn integrate_s(&self, t: f64, a: f64, b: f64) -> Result<f64> {
        let ProblemParams { m, big_m, horizon } = self.params;
        match &self.base {
            Some(g) => {
                Ok(g.integrate_s(t, a, b)? - big_m / (m + big_m) * g.integrate_s(0.0, a, b)?)
            }
            None => {
                let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
                let below_len = (hi.min(t) - lo).max(0.0);
                let base = (1.0 - big_m * t) * (hi - lo) + big_m * horizon * below_len;
                Ok(sign * base / (big_m * horizon))
            }
        }
    }
}
