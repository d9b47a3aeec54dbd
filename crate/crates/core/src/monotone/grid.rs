use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sided::SidedPoint;

/// `2n + 1` equispaced nodes on `[−T, T]`, symmetric about 0, with every
/// integer of the interval a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    horizon: f64,
    n: usize,
}

impl UniformGrid {
    pub fn new(horizon: f64, n: usize) -> Result<Self> {
        if n == 0
            || horizon.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
            || !horizon.is_finite()
        {
            return Err(Error::GridMismatch(format!(
                "need n ≥ 1 and T > 0, got n = {n}, T = {horizon}"
            )));
        }
        let per_unit = n as f64 / horizon;
        for j in 1..=horizon.floor() as i64 {
            let k = j as f64 * per_unit;
            if (k - k.round()).abs() > 1e-9 * k.max(1.0) {
                return Err(Error::GridMismatch(format!(
                    "integer {j} is not a node of the grid with n = {n} on T = {horizon}"
                )));
            }
        }
        Ok(UniformGrid { horizon, n })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn half_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        2 * self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.n as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        (k as f64 - self.n as f64) * self.horizon / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.node(k)).collect()
    }

    /// Index of `−t_k`.
    pub fn mirror(&self, k: usize) -> usize {
        2 * self.n - k
    }

    /// Index of the node at integer `j`.
    pub fn integer_node(&self, j: i64) -> usize {
        let k = self.n as f64 + j as f64 * self.n as f64 / self.horizon;
        k.round() as usize
    }

    /// Node holding `[t]`.
    pub fn label_node(&self, t: SidedPoint) -> usize {
        self.integer_node(t.cell_index())
    }

    pub fn is_integer_node(&self, k: usize) -> bool {
        let t = self.node(k);
        (t - t.round()).abs() < 1e-9 * self.step()
    }
}

/// Values of a function at the nodes of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFn {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
}

impl SampledFn {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(SampledFn { grid, values })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        SampledFn { grid, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_are_nodes() {
        let g = UniformGrid::new(1.6, 256).unwrap();
        assert_eq!(g.len(), 513);
        assert_eq!(g.node(g.integer_node(1)), 1.0);
        assert_eq!(g.node(g.integer_node(-1)), -1.0);
        assert_eq!(g.node(g.mirror(10)), -g.node(10));
        assert!(g.is_integer_node(g.integer_node(0)));
        assert!(UniformGrid::new(1.6, 100).is_err());
    }

    #[test]
    fn sided_labels() {
        let g = UniformGrid::new(1.6, 256).unwrap();
        assert_eq!(g.label_node(SidedPoint::minus(1.0)), g.integer_node(0));
        assert_eq!(g.label_node(SidedPoint::plus(1.0)), g.integer_node(1));
        assert_eq!(g.label_node(SidedPoint::exact(-1.3)), g.integer_node(-1));
    }
}
