use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::params::Family;

use super::{classify, ClassifyOptions, SignClass, Strategy};

/// `n` equispaced points on `[lo, hi]`; empty when `n = 0` or the range
/// has no extent.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 0 || hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Vec::new();
    }
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Classes on the lattice `m_axis × big_m_axis`, row-major in `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub family: Family,
    pub horizon: f64,
    pub m_axis: Vec<f64>,
    pub big_m_axis: Vec<f64>,
    pub classes: Vec<SignClass>,
    pub strategies: Vec<Option<Strategy>>,
}

impl RegionGrid {
    pub fn get(&self, i: usize, j: usize) -> SignClass {
        self.classes[i * self.big_m_axis.len() + j]
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn count(&self, class: SignClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, SignClass)> + '_ {
        self.m_axis
            .iter()
            .flat_map(move |&m| self.big_m_axis.iter().map(move |&bm| (m, bm)))
            .zip(&self.classes)
            .map(|((m, bm), &c)| (m, bm, c))
    }

    /// CSV with header `m,M,class`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        writeln!(w, "m,M,class")?;
        for (m, bm, c) in self.cells() {
            writeln!(w, "{m:.16e},{bm:.16e},{}", c.name())?;
        }
        Ok(())
    }

    /// JSON with both axes and row-major class codes.
    pub fn to_json(&self) -> serde_json::Value {
        let legend: serde_json::Map<String, serde_json::Value> = SignClass::ALL
            .iter()
            .map(|c| (c.code().to_string(), c.name().into()))
            .collect();
        serde_json::json!({
            "family": self.family,
            "T": self.horizon,
            "m_axis": self.m_axis,
            "M_axis": self.big_m_axis,
            "classes": self.classes.iter().map(|c| c.code()).collect::<Vec<_>>(),
            "strategies": self.strategies.iter().map(|s| s.map(|s| s.name())).collect::<Vec<_>>(),
            "legend": legend,
        })
    }
}

/// Classifies every lattice point in parallel; the result does not depend
/// on the thread count.
pub fn sweep_region(
    m_axis: Vec<f64>,
    big_m_axis: Vec<f64>,
    horizon: f64,
    opts: &ClassifyOptions,
) -> RegionGrid {
    let pairs: Vec<(f64, f64)> = m_axis
        .iter()
        .flat_map(|&m| big_m_axis.iter().map(move |&bm| (m, bm)))
        .collect();
    let results: Vec<_> = pairs
        .par_iter()
        .map(|&(m, bm)| classify(m, bm, horizon, opts))
        .collect();
    RegionGrid {
        family: opts.family,
        horizon,
        m_axis,
        big_m_axis,
        classes: results.iter().map(|r| r.class).collect(),
        strategies: results.iter().map(|r| r.strategy).collect(),
    }
}
