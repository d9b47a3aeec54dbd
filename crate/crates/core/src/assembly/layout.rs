use serde::{Deserialize, Serialize};

use crate::params::Family;
use crate::sided::SidedPoint;

/// Partition of the domain by the value of `[t]`.
///
/// `labels[i]` is the integer taken by `[t]` on `cells[i]`. Labels are
/// consecutive and ascending; cells of zero length (integer `T`) are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellLayout {
    pub labels: Vec<i64>,
    pub cells: Vec<(f64, f64)>,
    pub domain: (f64, f64),
}

impl CellLayout {
    /// Layout of `[−T, T]` under truncation toward zero.
    pub fn symmetric(horizon: f64) -> Self {
        let n = horizon.floor() as i64;
        let mut labels = Vec::new();
        let mut cells = Vec::new();
        for k in -n..=n {
            let k_f = k as f64;
            let (lo, hi) = match k.signum() {
                -1 => ((k_f - 1.0).max(-horizon), k_f),
                0 => ((-1f64).max(-horizon), 1f64.min(horizon)),
                _ => (k_f, (k_f + 1.0).min(horizon)),
            };
            if hi > lo {
                labels.push(k);
                cells.push((lo, hi));
            }
        }
        CellLayout {
            labels,
            cells,
            domain: (-horizon, horizon),
        }
    }

    /// Layout of `[0, T]` under truncation toward zero.
    pub fn half(horizon: f64) -> Self {
        let n = horizon.floor() as i64;
        let mut labels = Vec::new();
        let mut cells = Vec::new();
        for k in 0..=n {
            let lo = k as f64;
            let hi = (lo + 1.0).min(horizon);
            if hi > lo {
                labels.push(k);
                cells.push((lo, hi));
            }
        }
        CellLayout {
            labels,
            cells,
            domain: (0.0, horizon),
        }
    }

    pub fn for_family(family: Family, horizon: f64) -> Self {
        match family {
            Family::Ode => Self::half(horizon),
            Family::Reflection => Self::symmetric(horizon),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Index of the cell containing `t`. Points in a dropped zero-length end
    /// cell map to the adjacent label.
    pub fn index_of(&self, t: SidedPoint) -> usize {
        let offset = t.cell_index() - self.labels[0];
        offset.clamp(0, self.labels.len() as i64 - 1) as usize
    }

    pub fn label_of(&self, t: SidedPoint) -> i64 {
        self.labels[self.index_of(t)]
    }

    /// Integers strictly inside the domain, where kernels jump in `s`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.domain;
        let lo = a.floor() as i64;
        let hi = b.ceil() as i64;
        (lo..=hi)
            .map(|k| k as f64)
            .filter(|&x| x > a && x < b)
            .collect()
    }
}

pub fn build_layout(horizon: f64) -> CellLayout {
    CellLayout::symmetric(horizon)
}
