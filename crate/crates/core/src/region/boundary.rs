use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{on_eigenline, reflection_singular, Family};

use super::SignClass;

/// Open intervals of `M` with a positive and with a negative kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignBand {
    pub positive: (f64, f64),
    pub negative: (f64, f64),
}

impl SignBand {
    pub fn classify(&self, big_m: f64) -> SignClass {
        let inside = |(lo, hi): (f64, f64)| big_m > lo && big_m < hi;
        if inside(self.positive) {
            SignClass::Positive
        } else if inside(self.negative) {
            SignClass::Negative
        } else {
            SignClass::SignChanging
        }
    }
}

/// Exact bands for `v' + m v + M v([t])` on `[0, T]` with `T ≤ 1`:
/// positive on `(−m, m/(e^{mT}−1))`, `(0, 1/T)` at `m = 0`.
pub fn ode_region_boundary(m: f64, horizon: f64) -> Result<SignBand> {
    check_horizon(horizon)?;
    let upper = |m: f64| {
        if m == 0.0 {
            1.0 / horizon
        } else {
            m / (m * horizon).exp_m1()
        }
    };
    Ok(SignBand {
        positive: (-m, upper(m)),
        negative: (-upper(-m), -m),
    })
}

/// Exact bands for the reflection problem with `T ≤ 1` and `|mT| < π/4`:
/// positive on `(−m, ½m(cot(mT) − 1))`, `(0, 1/(2T))` at `m = 0`.
pub fn reflection_region_boundary_small_t(m: f64, horizon: f64) -> Result<SignBand> {
    check_horizon(horizon)?;
    if (m * horizon).abs() >= FRAC_PI_4 {
        return Err(Error::Domain(format!(
            "|mT| = {} ≥ π/4: no constant-sign band",
            (m * horizon).abs()
        )));
    }
    let upper = |m: f64| {
        if m == 0.0 {
            0.5 / horizon
        } else {
            0.5 * m * (1.0 / (m * horizon).tan() - 1.0)
        }
    };
    Ok(SignBand {
        positive: (-m, upper(m)),
        negative: (-upper(-m), -m),
    })
}

fn check_horizon(horizon: f64) -> Result<()> {
    if horizon > 0.0 && horizon <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "closed-form bands need 0 < T ≤ 1, got {horizon}"
        )))
    }
}

/// Classification from the closed-form bands (`T ≤ 1`).
pub fn closed_form_class(family: Family, m: f64, big_m: f64, horizon: f64) -> Result<SignClass> {
    if on_eigenline(m, big_m) {
        return Ok(SignClass::Singular);
    }
    match family {
        Family::Ode => Ok(ode_region_boundary(m, horizon)?.classify(big_m)),
        Family::Reflection => {
            check_horizon(horizon)?;
            if m != 0.0 && reflection_singular(m, horizon).is_some() {
                return Ok(SignClass::Singular);
            }
            if (m * horizon).abs() >= FRAC_PI_4 {
                return Ok(SignClass::SignChanging);
            }
            Ok(reflection_region_boundary_small_t(m, horizon)?.classify(big_m))
        }
    }
}

/// A named boundary curve `M = f(m)` sampled on an `m` axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// The four closed-form boundary curves over `m_axis` (`T ≤ 1`); points
/// where a curve is undefined are skipped.
pub fn boundary_polylines(family: Family, m_axis: &[f64], horizon: f64) -> Result<Vec<Polyline>> {
    check_horizon(horizon)?;
    let band = |m: f64| match family {
        Family::Ode => ode_region_boundary(m, horizon).ok(),
        Family::Reflection => reflection_region_boundary_small_t(m, horizon).ok(),
    };
    let names = [
        "positive_lower",
        "positive_upper",
        "negative_lower",
        "negative_upper",
    ];
    Ok(names
        .iter()
        .enumerate()
        .map(|(k, name)| Polyline {
            name: name.to_string(),
            points: m_axis
                .iter()
                .filter_map(|&m| {
                    let b = band(m)?;
                    let v = [b.positive.0, b.positive.1, b.negative.0, b.negative.1][k];
                    Some((m, v))
                })
                .collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ode_band_examples() {
        let b = ode_region_boundary(1.0, 1.0).unwrap();
        assert!((b.positive.1 - 0.581_976_706_869_326_4).abs() < 1e-12);
        assert_eq!(ode_region_boundary(0.0, 1.0).unwrap().positive, (-0.0, 1.0));
    }

    #[test]
    fn reflection_band_examples() {
        let b = reflection_region_boundary_small_t(0.5, 1.0).unwrap();
        assert!((b.positive.1 - 0.207_621_930_428_113).abs() < 1e-12);
        let b0 = reflection_region_boundary_small_t(0.0, 0.5).unwrap();
        assert_eq!(b0.positive.1, 1.0);
        assert_eq!(b0.negative, (-1.0, -0.0));
        assert!(reflection_region_boundary_small_t(0.8, 1.0).is_err());
    }

    #[test]
    fn negative_band_mirrors_positive() {
        for &m in &[-0.6, -0.2, 0.1, 0.7] {
            let b = reflection_region_boundary_small_t(m, 1.0).unwrap();
            let mirrored = reflection_region_boundary_small_t(-m, 1.0).unwrap();
            assert!((b.negative.0 + mirrored.positive.1).abs() < 1e-15);
            assert!((b.negative.1 + mirrored.positive.0).abs() < 1e-15);
        }
    }
}
