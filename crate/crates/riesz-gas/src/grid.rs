//! Radial grids and sampled radial functions.
//!
//! A [`RadialField`] is interpreted as the continuous, piecewise linear
//! interpolant of its samples on the grid and as zero beyond the last node.
//! Integrals against the radial measure `r^{n-1} dr` are taken exactly for that
//! interpolant through the element weights of [`RadialGrid::element_weights`].

use crate::error::{domain, Result};
use crate::quadrature;
use serde::{Deserialize, Serialize};

/// Smallest admissible first node; potentials are only evaluated away from the origin.
pub const MIN_RADIUS: f64 = 1e-12;

/// Strictly increasing positive radii `r_0 < r_1 < ... < r_{N-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    /// Validates and wraps a node vector.
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return domain("a radial grid needs at least two nodes");
        }
        if !(nodes[0] >= MIN_RADIUS) {
            return domain(format!("first node {} is below {MIN_RADIUS:e}", nodes[0]));
        }
        if nodes.iter().any(|r| !r.is_finite()) {
            return domain("grid nodes must be finite");
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return domain("grid nodes must be strictly increasing");
        }
        Ok(Self { nodes })
    }

    /// Uniform grid with `count` nodes on `[r_min, r_max]`.
    pub fn uniform(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        if count < 2 || !(r_max > r_min) {
            return domain("uniform grid needs count >= 2 and r_max > r_min");
        }
        let h = (r_max - r_min) / (count - 1) as f64;
        Self::new((0..count).map(|i| r_min + h * i as f64).collect())
    }

    /// Geometric grid with `count` nodes on `[r_min, r_max]`.
    pub fn geometric(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        if count < 2 || !(r_max > r_min) || !(r_min > 0.0) {
            return domain("geometric grid needs count >= 2 and 0 < r_min < r_max");
        }
        let q = (r_max / r_min).ln() / (count - 1) as f64;
        let mut nodes: Vec<f64> = (0..count).map(|i| r_min * (q * i as f64).exp()).collect();
        nodes[count - 1] = r_max;
        Self::new(nodes)
    }

    /// The node radii.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false: a valid grid has at least two nodes.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// First node.
    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    /// Last node.
    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Weights `w_i = ∫ φ_i(r) r^{n-1} dr` of the piecewise linear hat functions `φ_i`.
    pub fn element_weights(&self, n: usize) -> Vec<f64> {
        let deg = (n / 2 + 2).max(4);
        let mut w = vec![0.0; self.nodes.len()];
        for (k, pair) in self.nodes.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let h = b - a;
            let pw = |r: f64| r.powi(n as i32 - 1);
            w[k] += quadrature::fixed(deg, a, b, |r| (b - r) / h * pw(r));
            w[k + 1] += quadrature::fixed(deg, a, b, |r| (r - a) / h * pw(r));
        }
        w
    }

    /// Index `k` of the panel `[r_k, r_{k+1}]` containing `r`, if any.
    pub fn locate(&self, r: f64) -> Option<usize> {
        if r < self.first() || r > self.last() {
            return None;
        }
        let k = self.nodes.partition_point(|&x| x <= r);
        Some(k.saturating_sub(1).min(self.nodes.len() - 2))
    }
}

/// Samples of a radial function on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialField {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialField {
    /// Pairs a grid with finite samples of matching length.
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return domain(format!(
                "field has {} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("field samples must be finite");
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: &RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid.clone(), values)
    }

    /// The zero field on `grid`.
    pub fn zeros(grid: &RadialGrid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    /// The underlying grid.
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    /// The samples.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mutable access to the samples.
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Consumes the field and returns its samples.
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Same grid, new samples.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.grid.clone(), values)
    }

    /// Applies `f` to every sample.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Piecewise linear interpolant: constant below the first node, zero beyond the last.
    pub fn eval(&self, r: f64) -> f64 {
        let nodes = self.grid.nodes();
        if r <= nodes[0] {
            return self.values[0];
        }
        if r > self.grid.last() {
            return 0.0;
        }
        let k = self.grid.locate(r).unwrap_or(nodes.len() - 2);
        let t = (r - nodes[k]) / (nodes[k + 1] - nodes[k]);
        self.values[k] * (1.0 - t) + self.values[k + 1] * t
    }

    /// `∫ f(r) r^{n-1} dr` of the piecewise linear interpolant.
    pub fn radial_integral(&self, n: usize) -> f64 {
        weighted_sum(&self.grid.element_weights(n), &self.values)
    }

    /// Full-space integral `ω_n ∫ f(r) r^{n-1} dr`.
    pub fn space_integral(&self, n: usize) -> f64 {
        crate::radial_kernel::surface_area_unchecked(n) * self.radial_integral(n)
    }

    /// Smallest sample.
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest sample.
    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn weighted_sum(w: &[f64], v: &[f64]) -> f64 {
    w.iter().zip(v).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(RadialGrid::new(vec![1.0]).is_err());
        assert!(RadialGrid::new(vec![0.0, 1.0]).is_err());
        assert!(RadialGrid::new(vec![1.0, 1.0]).is_err());
        assert!(RadialGrid::new(vec![1e-13, 1.0]).is_err());
        assert!(RadialGrid::new(vec![0.5, 1.0, 2.0]).is_ok());
    }

    #[test]
    fn element_weights_integrate_linear_functions_exactly() {
        let g = RadialGrid::uniform(0.1, 2.0, 7).unwrap();
        let f = RadialField::from_fn(&g, |r| 3.0 - r).unwrap();
        let exact = |r: f64| r.powi(3) - r.powi(4) / 4.0;
        assert!((f.radial_integral(3) - (exact(2.0) - exact(0.1))).abs() < 1e-13);
    }

    #[test]
    fn interpolation_matches_nodes_and_vanishes_outside() {
        let g = RadialGrid::uniform(1.0, 3.0, 3).unwrap();
        let f = RadialField::new(g, vec![1.0, 3.0, 5.0]).unwrap();
        assert_eq!(f.eval(2.0), 3.0);
        assert!((f.eval(2.5) - 4.0).abs() < 1e-15);
        assert_eq!(f.eval(3.5), 0.0);
        assert_eq!(f.eval(0.5), 1.0);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let g = RadialGrid::uniform(1.0, 3.0, 3).unwrap();
        assert!(RadialField::new(g, vec![1.0]).is_err());
    }
}
