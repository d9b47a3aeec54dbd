use crate::error::{Error, Result, Singularity};
use crate::params::{reflection_singular, Family, ProblemParams};
use crate::sided::{diff_sign, SidedPoint};

use super::{check_points, Kernel};

/// Green's function of `v'' + m² v = h` with periodic conditions on
/// `[−T, T]`.
pub fn g_reflection_second_order(m: f64, horizon: f64, t: f64, s: f64) -> Result<f64> {
    ProblemParams::new(m, 0.0, horizon)?;
    if !(t.is_finite() && s.is_finite()) {
        return Err(Error::NonFinite(format!("point ({t}, {s})")));
    }
    if let Some(sing) = reflection_singular(m, horizon) {
        return Err(Error::SingularParameter(sing));
    }
    Ok((m * (horizon - (t - s).abs())).cos() / (2.0 * m * (m * horizon).sin()))
}

/// [`g_reflection_second_order`] as a kernel. It is continuous, so sides
/// are ignored.
#[derive(Debug, Clone, Copy)]
pub struct SecondOrderGreen {
    m: f64,
    horizon: f64,
}

impl SecondOrderGreen {
    pub fn new(m: f64, horizon: f64) -> Result<Self> {
        g_reflection_second_order(m, horizon, 0.0, 0.0)?;
        Ok(SecondOrderGreen { m, horizon })
    }
}

impl Kernel for SecondOrderGreen {
    fn params(&self) -> ProblemParams {
        ProblemParams {
            m: self.m,
            big_m: 0.0,
            horizon: self.horizon,
        }
    }

    fn family(&self) -> Family {
        Family::Reflection
    }

    fn eval(&self, t: SidedPoint, s: SidedPoint) -> Result<f64> {
        check_points(&t, &s)?;
        g_reflection_second_order(self.m, self.horizon, t.value, s.value)
    }

    fn integrate_s(&self, t: f64, a: f64, b: f64) -> Result<f64> {
        let (m, tt) = (self.m, self.horizon);
        // Antiderivative of cos(m(T − |t − r|)) in r.
        let prim = |r: f64| {
            if r <= t {
                (m * (tt - t + r)).sin() / m
            } else {
                2.0 * (m * tt).sin() / m - (m * (tt + t - r)).sin() / m
            }
        };
        Ok((prim(b) - prim(a)) / (2.0 * m * (m * tt).sin()))
    }
}

/// Green's function of `v'(t) + m v(−t) = h`, `v(−T) = v(T)`.
#[derive(Debug, Clone, Copy)]
pub struct ReflectionGreen {
    m: f64,
    horizon: f64,
    /// `2 sin(mT)`
    denom: f64,
}

impl ReflectionGreen {
    pub fn new(m: f64, horizon: f64) -> Result<Self> {
        ProblemParams::new(m, 0.0, horizon)?;
        if let Some(sing) = reflection_singular(m, horizon) {
            return Err(Error::SingularParameter(sing));
        }
        Ok(ReflectionGreen {
            m,
            horizon,
            denom: 2.0 * (m * horizon).sin(),
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub(crate) fn value(&self, t: &SidedPoint, s: &SidedPoint) -> Result<f64> {
        check_points(t, s)?;
        let Some(jump_side) = diff_sign(s, t) else {
            return Err(Error::AmbiguousSide {
                t: t.value,
                s: s.value,
            });
        };
        let (m, tt) = (self.m, self.horizon);
        let even = (m * (tt - (t.value + s.value).abs())).cos();
        let odd = (m * (tt - (t.value - s.value).abs())).sin();
        Ok((even - f64::from(jump_side) * odd) / self.denom)
    }

    /// Antiderivative in `r` on a piece where `sign(t + r) = sum_sign` and
    /// `sign(r − t) = diff_side`.
    fn antiderivative(&self, t: f64, r: f64, sum_sign: f64, diff_side: f64) -> f64 {
        let (m, tt) = (self.m, self.horizon);
        let a = -sum_sign * (m * (tt - sum_sign * (t + r))).sin();
        let b = -(m * (tt - diff_side * (r - t))).cos();
        (a + b) / (m * self.denom)
    }

    pub(crate) fn integral(&self, t: f64, a: f64, b: f64) -> f64 {
        let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
        let mut cuts = vec![lo, hi];
        for p in [t, -t] {
            if p > lo && p < hi {
                cuts.push(p);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let mid = 0.5 * (w[0] + w[1]);
            let sum_sign = if t + mid >= 0.0 { 1.0 } else { -1.0 };
            let diff_side = if mid >= t { 1.0 } else { -1.0 };
            total += self.antiderivative(t, w[1], sum_sign, diff_side)
                - self.antiderivative(t, w[0], sum_sign, diff_side);
        }
        sign * total
    }
}

pub fn g_reflection(m: f64, horizon: f64, t: SidedPoint, s: SidedPoint) -> Result<f64> {
    ReflectionGreen::new(m, horizon)?.value(&t, &s)
}

/// `∫_a^b Ḡ(t, r) dr` in closed form.
pub fn integral_g_reflection(m: f64, horizon: f64, t: f64, a: f64, b: f64) -> Result<f64> {
    Ok(ReflectionGreen::new(m, horizon)?.integral(t, a, b))
}

impl Kernel for ReflectionGreen {
    fn params(&self) -> ProblemParams {
        ProblemParams {
            m: self.m,
            big_m: 0.0,
            horizon: self.horizon,
        }
    }

    fn family(&self) -> Family {
        Family::Reflection
    }

    fn eval(&self, t: SidedPoint, s: SidedPoint) -> Result<f64> {
        self.value(&t, &s)
    }

    fn integrate_s(&self, t: f64, a: f64, b: f64) -> Result<f64> {
        Ok(self.integral(t, a, b))
    }
}

/// Green's function of `v'(t) + m v(−t) + M v(0) = h` on `[−T, T]`,
/// `T ≤ 1`, including the `m = 0` continuation.
#[derive(Debug, Clone, Copy)]
pub struct ReflectionPiecewiseSmallT {
    params: ProblemParams,
    base: Option<ReflectionGreen>,
}

impl ReflectionPiecewiseSmallT {
    pub fn new(params: ProblemParams) -> Result<Self> {
        let ProblemParams { m, big_m, horizon } = params;
        ProblemParams::new(m, big_m, horizon)?;
        if horizon > 1.0 {
            return Err(Error::Domain(format!(
                "closed form needs T ≤ 1, got {horizon}"
            )));
        }
        if params.on_eigenline() {
            return Err(Error::SingularParameter(Singularity::Eigenline));
        }
        let base = match reflection_singular(m, horizon) {
            Some(Singularity::ReflectionSpectrum { k: 0 }) => None,
            Some(sing) => return Err(Error::SingularParameter(sing)),
            None => Some(ReflectionGreen::new(m, horizon)?),
        };
        Ok(ReflectionPiecewiseSmallT { params, base })
    }
}

pub fn h_reflection_small_t(params: ProblemParams, t: SidedPoint, s: SidedPoint) -> Result<f64> {
    ReflectionPiecewiseSmallT::new(params)?.eval(t, s)
}

/// Signed length of `[a, b] ∩ (0, t)` (negative when `t < 0`).
fn signed_overlap(t: f64, a: f64, b: f64) -> f64 {
    let (lo, hi, sign) = if t >= 0.0 {
        (0.0, t, 1.0)
    } else {
        (t, 0.0, -1.0)
    };
    sign * (b.min(hi) - a.max(lo)).max(0.0)
}

impl Kernel for ReflectionPiecewiseSmallT {
    fn params(&self) -> ProblemParams {
        self.params
    }

    fn family(&self) -> Family {
        Family::Reflection
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
                // v(t) = (1 − M t)/(2 M T)·∫h + ∫_0^t h
                let origin = SidedPoint::exact(0.0);
                let (Some(vs_t), Some(vs_0)) = (diff_sign(&s, &t), diff_sign(&s, &origin)) else {
                    return Err(Error::AmbiguousSide {
                        t: t.value,
                        s: s.value,
                    });
                };
                let between = match (vs_0, vs_t) {
                    (1, -1) => 1.0,
                    (-1, 1) => -1.0,
                    _ => 0.0,
                };
                Ok((1.0 - big_m * t.value) / (2.0 * big_m * horizon) + between)
            }
        }
    }

    fn integrate_s(&self, t: f64, a: f64, b: f64) -> Result<f64> {
        let ProblemParams { m, big_m, horizon } = self.params;
        match &self.base {
            Some(g) => Ok(g.integral(t, a, b) - big_m / (m + big_m) * g.integral(0.0, a, b)),
            None => {
                let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
                let flat = (1.0 - big_m * t) / (2.0 * big_m * horizon) * (hi - lo);
                Ok(sign * (flat + signed_overlap(t, lo, hi)))
            }
        }
    }
}
