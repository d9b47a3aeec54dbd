//! Points carrying one-sided limit information.
//!
//! Kernels jump on the diagonal and at integer labels, so evaluation points
//! are real numbers tagged with an infinitesimal offset. Two orders are kept:
//! `side` is the first-order offset `±ε` and `sub` a second-order offset
//! `±ε²`. This expresses iterated limits such as `H(s⁻, s)` evaluated at
//! `s = 0⁺`, i.e. `t = 0 + ε − ε²`, `s = 0 + ε`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    #[default]
    Exact,
    Plus,
}

impl Side {
    pub fn sign(self) -> i32 {
        match self {
            Side::Minus => -1,
            Side::Exact => 0,
            Side::Plus => 1,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Exact => Side::Exact,
            Side::Plus => Side::Minus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Side::Minus => "-",
            Side::Exact => "",
            Side::Plus => "+",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Exact => "exact",
            Side::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidedPoint {
    pub value: f64,
    pub side: Side,
    #[serde(default)]
    pub sub: Side,
}

impl SidedPoint {
    pub const fn exact(value: f64) -> Self {
        SidedPoint {
            value,
            side: Side::Exact,
            sub: Side::Exact,
        }
    }

    pub const fn minus(value: f64) -> Self {
        SidedPoint {
            value,
            side: Side::Minus,
            sub: Side::Exact,
        }
    }

    pub const fn plus(value: f64) -> Self {
        SidedPoint {
            value,
            side: Side::Plus,
            sub: Side::Exact,
        }
    }

    pub const fn with_side(value: f64, side: Side) -> Self {
        SidedPoint {
            value,
            side,
            sub: Side::Exact,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.side == Side::Exact && self.sub == Side::Exact
    }

    /// Offset by one more infinitesimal order in direction `dir`.
    fn refine(self, dir: Side) -> Self {
        if self.side == Side::Exact {
            SidedPoint { side: dir, ..self }
        } else if self.sub == Side::Exact {
            SidedPoint { sub: dir, ..self }
        } else {
            // Two orders are already fixed; a third would not change any
            // comparison this crate makes against a point one order coarser.
            self
        }
    }

    /// A point infinitesimally below `self`, one order finer.
    pub fn below(self) -> Self {
        self.refine(Side::Minus)
    }

    /// A point infinitesimally above `self`, one order finer.
    pub fn above(self) -> Self {
        self.refine(Side::Plus)
    }

    /// Lexicographic comparison of the value and both infinitesimal orders.
    pub fn cmp_to(&self, other: &SidedPoint) -> Ordering {
        self.value
            .partial_cmp(&other.value)
            .unwrap_or(Ordering::Equal)
            .then(self.side.sign().cmp(&other.side.sign()))
            .then(self.sub.sign().cmp(&other.sub.sign()))
    }

    /// Sign of `self + other`, resolved through the infinitesimal orders.
    pub fn sum_sign(&self, other: &SidedPoint) -> i32 {
        let v = self.value + other.value;
        if v > 0.0 {
            return 1;
        }
        if v < 0.0 {
            return -1;
        }
        let first = self.side.sign() + other.side.sign();
        if first != 0 {
            return first.signum();
        }
        (self.sub.sign() + other.sub.sign()).signum()
    }

    /// Direction of the first nonzero infinitesimal order.
    pub fn direction(&self) -> i32 {
        if self.side != Side::Exact {
            self.side.sign()
        } else {
            self.sub.sign()
        }
    }

    /// `[t]`, truncation toward zero, honoring the one-sided offset when the
    /// value is an integer: `1⁻ → 0`, `(−1)⁺ → 0`, `0⁻ → 0`, `(−1)⁻ → −1`.
    pub fn cell_index(&self) -> i64 {
        let v = self.value;
        if v.fract() != 0.0 {
            return floor_tz(v);
        }
        let n = v as i64;
        match self.direction() {
            1 if n < 0 => n + 1,
            -1 if n > 0 => n - 1,
            _ => n,
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.value.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(format!("point {self}")))
        }
    }
}

impl From<f64> for SidedPoint {
    fn from(value: f64) -> Self {
        SidedPoint::exact(value)
    }
}

impl fmt::Display for SidedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            self.value,
            self.side.symbol(),
            self.sub.symbol()
        )
    }
}

impl FromStr for SidedPoint {
    type Err = Error;

    /// Parses `0.5`, `0.5-`, `0.5+`, or two-order forms like `0+-`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.trim_end_matches(['+', '-']);
        let suffix = &s[body.len()..];
        // A bare exponent sign such as `1e-` is not a side marker.
        if body.ends_with(['e', 'E']) || body.is_empty() {
            return Err(Error::Domain(format!("cannot parse point `{s}`")));
        }
        let value: f64 = body
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse point `{s}`")))?;
        let mut sides = suffix
            .chars()
            .map(|c| if c == '+' { Side::Plus } else { Side::Minus });
        let side = sides.next().unwrap_or(Side::Exact);
        let sub = sides.next().unwrap_or(Side::Exact);
        if sides.next().is_some() {
            return Err(Error::Domain(format!(
                "at most two side markers allowed in `{s}`"
            )));
        }
        Ok(SidedPoint { value, side, sub })
    }
}

/// Truncation toward zero: `n` on `[n, n+1)` for `n ≥ 0` and `−n` on
/// `(−n−1, −n]`.
pub fn floor_tz(t: f64) -> i64 {
    t.trunc() as i64
}

/// Sign of `s − t` through all infinitesimal orders; `None` when the points
/// coincide.
pub fn diff_sign(s: &SidedPoint, t: &SidedPoint) -> Option<i32> {
    match s.cmp_to(t) {
        Ordering::Less => Some(-1),
        Ordering::Greater => Some(1),
        Ordering::Equal => None,
    }
}

impl std::ops::Neg for SidedPoint {
    type Output = Self;

    fn neg(self) -> Self {
        SidedPoint {
            value: -self.value,
            side: self.side.flip(),
            sub: self.sub.flip(),
        }
    }
}
