use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Singularity};
use crate::sided::SidedPoint;

/// Coefficients of `v'(t) + m·v(±t) + M·v([t]) = h(t)` on a periodic
/// interval of horizon `T`.
///
/// For the reflection problem the interval is `[−T, T]`; for the ODE problem
/// it is `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub m: f64,
    pub big_m: f64,
    pub horizon: f64,
}

impl ProblemParams {
    pub fn new(m: f64, big_m: f64, horizon: f64) -> Result<Self> {
        if !(m.is_finite() && big_m.is_finite() && horizon.is_finite()) {
            return Err(Error::NonFinite(format!(
                "parameters m={m}, M={big_m}, T={horizon}"
            )));
        }
        if horizon <= 0.0 {
            return Err(Error::Domain(format!(
                "horizon T must be positive, got {horizon}"
            )));
        }
        Ok(ProblemParams { m, big_m, horizon })
    }

    /// The triple with `(m, M)` negated, which maps positive kernels to
    /// negative ones.
    pub fn negated(&self) -> Self {
        ProblemParams {
            m: -self.m,
            big_m: -self.big_m,
            ..*self
        }
    }

    pub fn with_big_m(&self, big_m: f64) -> Self {
        ProblemParams { big_m, ..*self }
    }

    pub fn on_eigenline(&self) -> bool {
        on_eigenline(self.m, self.big_m)
    }
}

pub fn on_eigenline(m: f64, big_m: f64) -> bool {
    (m + big_m).abs() <= 1e-12 * 1f64.max(m.abs()).max(big_m.abs())
}

/// `sin(mT) = 0` up to a relative guard; returns the offending multiple.
pub fn reflection_singular(m: f64, horizon: f64) -> Option<Singularity> {
    let x = m * horizon;
    if x.sin().abs() <= 1e-12 * 1f64.max(x.abs()) {
        Some(Singularity::ReflectionSpectrum {
            k: (x / PI).round() as i64,
        })
    } else {
        None
    }
}

pub fn ode_singular(m: f64, horizon: f64) -> Option<Singularity> {
    ((m * horizon).abs() <= 1e-12).then_some(Singularity::OdeZero)
}

/// Which periodic problem a kernel belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `v' + m v(t) + M v([t])` on `[0, T]`.
    Ode,
    /// `v' + m v(−t) + M v([t])` on `[−T, T]`.
    Reflection,
}

impl Family {
    pub fn domain(self, horizon: f64) -> (f64, f64) {
        match self {
            Family::Ode => (0.0, horizon),
            Family::Reflection => (-horizon, horizon),
        }
    }

    /// Argument of the `m` term: `t` for the ODE, `−t` with reflection.
    pub fn involution(self, t: SidedPoint) -> SidedPoint {
        match self {
            Family::Ode => t,
            Family::Reflection => -t,
        }
    }

    pub fn singular(self, m: f64, horizon: f64) -> Option<Singularity> {
        match self {
            Family::Ode => ode_singular(m, horizon),
            Family::Reflection => reflection_singular(m, horizon),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ode => "ode",
            Family::Reflection => "reflection",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ode" => Ok(Family::Ode),
            "reflection" => Ok(Family::Reflection),
            _ => Err(Error::Domain(format!(
                "unknown family `{s}` (ode | reflection)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    OdeExp,
    OdePiecewise,
    ReflectionSecondOrder,
    ReflectionFirstOrder,
    ReflectionPiecewise,
}

impl KernelKind {
    pub const ALL: [KernelKind; 5] = [
        KernelKind::OdeExp,
        KernelKind::OdePiecewise,
        KernelKind::ReflectionSecondOrder,
        KernelKind::ReflectionFirstOrder,
        KernelKind::ReflectionPiecewise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::OdeExp => "ode-exp",
            KernelKind::OdePiecewise => "ode-piecewise",
            KernelKind::ReflectionSecondOrder => "reflection-second-order",
            KernelKind::ReflectionFirstOrder => "reflection-first-order",
            KernelKind::ReflectionPiecewise => "reflection-piecewise",
        }
    }

    pub fn family(self) -> Family {
        match self {
            KernelKind::OdeExp | KernelKind::OdePiecewise => Family::Ode,
            _ => Family::Reflection,
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        KernelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown kernel `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_predicates() {
        assert!(on_eigenline(0.3, -0.3));
        assert!(!on_eigenline(0.3, -0.2999));
        assert_eq!(
            reflection_singular(0.0, 1.0),
            Some(Singularity::ReflectionSpectrum { k: 0 })
        );
        assert_eq!(
            reflection_singular(PI, 1.0),
            Some(Singularity::ReflectionSpectrum { k: 1 })
        );
        assert_eq!(reflection_singular(0.5, 1.0), None);
        assert!(ode_singular(0.0, 2.0).is_some());
    }

    #[test]
    fn kind_roundtrip() {
        for k in KernelKind::ALL {
            assert_eq!(k.name().parse::<KernelKind>().unwrap(), k);
        }
    }
}
