//! Lagrangian snapshots in mass coordinates.

use crate::error::{domain, Result};
use crate::grid::{RadialField, RadialGrid};
use crate::quadrature;
use serde::{Deserialize, Serialize};

/// A snapshot of the flow on `N` mass cells bounded by `N + 1` particle paths.
///
/// Cell `c` lies between edges `c` and `c + 1` and carries the fixed mass increment
/// `dx[c]`; its density is the exact cell average
/// `ρ_c = n dx_c / (r_{c+1}^n − r_c^n)`, so the consistency relation between mass
/// coordinates and radii holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluidState {
    /// Spatial dimension.
    pub n: usize,
    /// Mass coordinates of the edges, `x_0 = 0` and `x_N = M/ω_n`.
    pub x: Vec<f64>,
    /// Mass increments of the cells.
    pub dx: Vec<f64>,
    /// Particle radii at the edges; `r[0]` is the fixed inner radius.
    pub r: Vec<f64>,
    /// Cell-averaged densities.
    pub rho: Vec<f64>,
    /// Edge velocities; `u[0] = 0`.
    pub u: Vec<f64>,
    /// Time.
    pub t: f64,
    /// Outer radius `r[N]`.
    pub b_t: f64,
}

/// Volume factor `(b^n − a^n)/n` of the shell `[a, b]`, computed without cancellation.
pub(crate) fn shell_volume(n: usize, a: f64, b: f64) -> f64 {
    let mut s = 0.0;
    let mut ak = 1.0;
    let mut bk = b.powi(n as i32 - 1);
    for _ in 0..n {
        s += ak * bk;
        ak *= a;
        bk /= b;
    }
    (b - a) * s / n as f64
}

impl FluidState {
    /// Assembles a state from radii, fixed mass increments and velocities.
    pub fn new(n: usize, r: Vec<f64>, dx: Vec<f64>, mut u: Vec<f64>, t: f64) -> Result<Self> {
        if r.len() < 3 || dx.len() + 1 != r.len() || u.len() != r.len() {
            return domain("a fluid state needs N + 1 radii and velocities for N >= 2 cells");
        }
        if !(r[0] > 0.0) || r.windows(2).any(|w| !(w[1] > w[0])) {
            return domain("particle radii must be positive and strictly increasing");
        }
        if dx.iter().any(|&m| !(m > 0.0)) {
            return domain("cell masses must be positive");
        }
        u[0] = 0.0;
        let mut x = Vec::with_capacity(r.len());
        let mut acc = 0.0;
        x.push(0.0);
        for &m in &dx {
            acc += m;
            x.push(acc);
        }
        let rho = densities(n, &r, &dx);
        let b_t = *r.last().expect("nonempty");
        Ok(Self {
            n,
            x,
            dx,
            r,
            rho,
            u,
            t,
            b_t,
        })
    }

    /// Number of cells.
    pub fn cells(&self) -> usize {
        self.dx.len()
    }

    /// Total mass `ω_n x_N`.
    pub fn mass(&self) -> f64 {
        crate::radial_kernel::surface_area_unchecked(self.n) * self.x[self.cells()]
    }

    /// Mass recomputed from radii and densities, `ω_n Σ ρ_c (r_{c+1}^n − r_c^n)/n`.
    pub fn eulerian_mass(&self) -> f64 {
        let w = crate::radial_kernel::surface_area_unchecked(self.n);
        w * (0..self.cells())
            .map(|c| self.rho[c] * shell_volume(self.n, self.r[c], self.r[c + 1]))
            .sum::<f64>()
    }

    /// Cell midpoints.
    pub fn centers(&self) -> Vec<f64> {
        self.r.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Mass coordinates of the edges recomputed from radii and densities.
    pub fn mass_coordinates(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.r.len());
        let mut acc = 0.0;
        out.push(0.0);
        for c in 0..self.cells() {
            acc += self.rho[c] * shell_volume(self.n, self.r[c], self.r[c + 1]);
            out.push(acc);
        }
        out
    }

    /// Smallest cell density.
    pub fn min_rho(&self) -> f64 {
        self.rho.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Replaces radii and velocities, recomputing densities.
    pub(crate) fn with_motion(&self, r: Vec<f64>, u: Vec<f64>, t: f64) -> Self {
        let rho = densities(self.n, &r, &self.dx);
        let b_t = *r.last().expect("nonempty");
        Self {
            n: self.n,
            x: self.x.clone(),
            dx: self.dx.clone(),
            r,
            rho,
            u,
            t,
            b_t,
        }
    }

    /// Eulerian view on the particle-radius grid: density interpolated from the two
    /// adjacent cell averages to each edge (one-sided at the ends) and the edge velocities.
    pub fn eulerian_map(&self) -> Result<(RadialField, RadialField)> {
        let grid = RadialGrid::new(self.r.clone())?;
        let nc = self.cells();
        let mut rho = Vec::with_capacity(nc + 1);
        rho.push(self.rho[0]);
        for i in 1..nc {
            rho.push(0.5 * (self.rho[i - 1] + self.rho[i]));
        }
        rho.push(self.rho[nc - 1]);
        Ok((
            RadialField::new(grid.clone(), rho)?,
            RadialField::new(grid, self.u.clone())?,
        ))
    }

    /// Builds a state from a radial density profile on `[inner, outer]` with
    /// velocity field `u`, placing edges at equal-mass positions blended with
    /// uniform radii by the weight `blend ∈ [0, 1]` given to the equal-mass positions.
    ///
    /// Cell masses are exact integrals of the profile over each cell.
    pub fn from_profile(
        n: usize,
        rho: &dyn Fn(f64) -> f64,
        u: &dyn Fn(f64) -> f64,
        inner: f64,
        outer: f64,
        cells: usize,
        blend: f64,
    ) -> Result<Self> {
        let edges = blended_edges(n, rho, inner, outer, cells, blend)?;
        let dx = cell_masses(n, rho, &edges);
        let us: Vec<f64> = edges.iter().map(|&r| u(r)).collect();
        Self::new(n, edges, dx, us, 0.0)
    }
}

pub(crate) fn densities(n: usize, r: &[f64], dx: &[f64]) -> Vec<f64> {
    dx.iter()
        .enumerate()
        .map(|(c, &m)| m / shell_volume(n, r[c], r[c + 1]))
        .collect()
}

/// Gauss-Legendre order for per-cell integrals of smooth profiles.
pub(crate) const CELL_NODES: usize = 16;

/// `∫_{r_c}^{r_{c+1}} ρ r^{n−1} dr` for every cell.
pub(crate) fn cell_masses(n: usize, rho: &dyn Fn(f64) -> f64, edges: &[f64]) -> Vec<f64> {
    edges
        .windows(2)
        .map(|w| quadrature::fixed(CELL_NODES, w[0], w[1], |r| rho(r) * r.powi(n as i32 - 1)))
        .collect()
}

/// Edges on `[inner, outer]` mixing equal-mass and uniform placements.
pub(crate) fn blended_edges(
    n: usize,
    rho: &dyn Fn(f64) -> f64,
    inner: f64,
    outer: f64,
    cells: usize,
    blend: f64,
) -> Result<Vec<f64>> {
    if !(outer > inner && inner > 0.0) || cells < 2 {
        return domain("profile interval must satisfy 0 < inner < outer with at least two cells");
    }
    let fine = 16 * cells;
    let h = (outer - inner) / fine as f64;
    let fine_edges: Vec<f64> = (0..=fine).map(|k| inner + h * k as f64).collect();
    let masses = cell_masses(n, rho, &fine_edges);
    let mut cum = vec![0.0; fine + 1];
    for k in 0..fine {
        cum[k + 1] = cum[k] + masses[k].max(0.0);
    }
    let total = cum[fine];
    if !(total > 0.0) {
        return domain("profile has no mass on the interval");
    }
    let mut edges = Vec::with_capacity(cells + 1);
    for i in 0..=cells {
        let target = total * i as f64 / cells as f64;
        let k = cum.partition_point(|&c| c < target).clamp(1, fine);
        let (c0, c1) = (cum[k - 1], cum[k]);
        let frac = if c1 > c0 {
            ((target - c0) / (c1 - c0)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let r_mass = fine_edges[k - 1] + frac * h;
        let r_uni = inner + (outer - inner) * i as f64 / cells as f64;
        edges.push(blend * r_mass + (1.0 - blend) * r_uni);
    }
    edges[0] = inner;
    edges[cells] = outer;
    if edges.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("edge placement produced a degenerate cell");
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_volume_matches_difference_of_powers() {
        for n in 2..6 {
            let (a, b) = (0.3f64, 1.7f64);
            let exact = (b.powi(n as i32) - a.powi(n as i32)) / n as f64;
            assert!((shell_volume(n, a, b) - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn round_trip_of_mass_coordinates() {
        let s =
            FluidState::from_profile(3, &|r| (-r * r).exp(), &|_| 0.0, 0.1, 3.0, 32, 0.5).unwrap();
        let x = s.mass_coordinates();
        for (a, b) in x.iter().zip(&s.x) {
            assert!((a - b).abs() <= 1e-14 * s.x[32].max(1.0));
        }
        let (rho, u) = s.eulerian_map().unwrap();
        assert_eq!(rho.grid().nodes(), &s.r[..]);
        assert!(u.values().iter().all(|&v| v == 0.0));
        assert!(s.r.windows(2).all(|w| w[1] > w[0]));
    }
}
