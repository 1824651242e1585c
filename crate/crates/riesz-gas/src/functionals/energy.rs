//! Energies, free energy and the distance to a steady state.

use crate::error::{domain, Error, Result};
use crate::grid::{weighted_sum, RadialField, RadialGrid};
use crate::kernel_matrix::{KernelKind, KernelMatrix};
use crate::radial_kernel::{surface_area_unchecked, PotentialSpec};
use serde::{Deserialize, Serialize};

/// Energy components at one instant, all integrated over `ℝⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// `∫ ½ ρ u²`.
    pub kinetic: f64,
    /// `∫ ρ e(ρ)`.
    pub internal: f64,
    /// `(κ/2) ∫ ρ Φ_α ∗ ρ`.
    pub interaction: f64,
    /// Sum of the three parts above.
    pub total: f64,
    /// `∫ ρ k_α(1 + r²)` when `α ∈ (−1, 0]`.
    pub moment: Option<f64>,
    /// Bresch-Desjardins functional, when supplied by the solver.
    pub bd_entropy: Option<f64>,
}

impl EnergyBreakdown {
    /// Assembles a breakdown whose total is the exact sum of its parts.
    pub fn new(kinetic: f64, internal: f64, interaction: f64) -> Self {
        Self {
            kinetic,
            internal,
            interaction,
            total: kinetic + internal + interaction,
            moment: None,
            bd_entropy: None,
        }
    }
}

/// Potential matrix and quadrature weights on a fixed grid.
///
/// The bilinear form [`InteractionOperator::pairing`] is the symmetric part of
/// the nodal quadrature of `∫ f Φ_α ∗ g`, so that identities relying on the
/// symmetry of the continuous form hold to rounding error.
#[derive(Debug, Clone)]
pub struct InteractionOperator {
    spec: PotentialSpec,
    grid: RadialGrid,
    weights: Vec<f64>,
    matrix: KernelMatrix,
}

impl InteractionOperator {
    /// Assembles the potential matrix for `grid`.
    pub fn new(spec: &PotentialSpec, grid: &RadialGrid) -> Self {
        Self {
            spec: *spec,
            grid: grid.clone(),
            weights: grid.element_weights(spec.n),
            matrix: KernelMatrix::eulerian(spec, grid, KernelKind::Potential),
        }
    }

    /// The grid the operator acts on.
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    /// Element weights `∫ φ_i r^{n−1} dr`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Φ_α ∗ f` at the nodes.
    pub fn potential(&self, f: &[f64]) -> Vec<f64> {
        self.matrix.apply(f)
    }

    /// Symmetric approximation of `∫_{ℝⁿ} f Φ_α ∗ g`.
    pub fn pairing(&self, f: &[f64], g: &[f64]) -> f64 {
        let pf = self.matrix.apply(f);
        let pg = self.matrix.apply(g);
        self.pairing_with(f, &pf, g, &pg)
    }

    /// Same as [`Self::pairing`] with precomputed potentials.
    pub fn pairing_with(&self, f: &[f64], pf: &[f64], g: &[f64], pg: &[f64]) -> f64 {
        let a: f64 = self
            .weights
            .iter()
            .zip(f)
            .zip(pg)
            .map(|((w, x), y)| w * x * y)
            .sum();
        let b: f64 = self
            .weights
            .iter()
            .zip(g)
            .zip(pf)
            .map(|((w, x), y)| w * x * y)
            .sum();
        0.5 * surface_area_unchecked(self.spec.n) * (a + b)
    }

    /// Full-space integral of nodal values.
    pub fn integrate(&self, v: &[f64]) -> f64 {
        surface_area_unchecked(self.spec.n) * weighted_sum(&self.weights, v)
    }

    /// Internal energy of nodal density values.
    pub fn internal_energy(&self, rho: &[f64]) -> f64 {
        let v: Vec<f64> = rho
            .iter()
            .map(|&r| r * self.spec.internal_energy_density(r))
            .collect();
        self.integrate(&v)
    }

    /// Free energy `∫ (ρ e(ρ) + ½ ρ Φ_α ∗ ρ)`.
    pub fn free_energy(&self, rho: &[f64]) -> f64 {
        self.internal_energy(rho) + 0.5 * self.pairing(rho, rho)
    }

    /// Distance `∫ (ϱe(ϱ) − ρ̃e(ρ̃)) + ∫ Φ_α∗ρ̃ (ϱ − ρ̃)`.
    pub fn distance(&self, rho: &[f64], rho_tilde: &[f64]) -> f64 {
        let diff: Vec<f64> = rho.iter().zip(rho_tilde).map(|(a, b)| a - b).collect();
        self.internal_energy(rho) - self.internal_energy(rho_tilde) + self.pairing(rho_tilde, &diff)
    }
}

fn check_nonnegative(rho: &RadialField) -> Result<()> {
    if rho.values().iter().any(|&v| v < 0.0) {
        return domain("density samples must be nonnegative");
    }
    Ok(())
}

/// Mass `ω_n ∫ ρ r^{n−1} dr`.
pub fn mass(n: usize, rho: &RadialField) -> f64 {
    rho.space_integral(n)
}

/// `‖f‖_{L^p(ℝⁿ)}` of a radial field.
pub fn lp_norm(n: usize, f: &RadialField, p: f64) -> f64 {
    f.map(|v| v.abs().powf(p)).space_integral(n).powf(1.0 / p)
}

/// Internal energy `ω_n ∫ ρ e(ρ) r^{n−1} dr`.
pub fn internal_energy(spec: &PotentialSpec, rho: &RadialField) -> Result<f64> {
    check_nonnegative(rho)?;
    Ok(rho
        .map(|r| r * spec.internal_energy_density(r))
        .space_integral(spec.n))
}

/// Kinetic energy `ω_n ∫ ½ m²/ρ r^{n−1} dr` with `0/0 = 0` on vacuum.
pub fn kinetic_energy(n: usize, rho: &RadialField, m: &RadialField) -> Result<f64> {
    check_nonnegative(rho)?;
    if rho.grid() != m.grid() {
        return domain("density and momentum must share a grid");
    }
    let mut v = Vec::with_capacity(rho.values().len());
    for (&r, &q) in rho.values().iter().zip(m.values()) {
        if r == 0.0 {
            if q != 0.0 {
                return Err(Error::Vacuum(format!("momentum {q} on a vacuum node")));
            }
            v.push(0.0);
        } else {
            v.push(0.5 * q * q / r);
        }
    }
    Ok(rho.with_values(v)?.space_integral(n))
}

/// Interaction energy `(κ/2) ∫ ρ Φ_α ∗ ρ`.
pub fn interaction_energy(spec: &PotentialSpec, rho: &RadialField) -> Result<f64> {
    check_nonnegative(rho)?;
    let op = InteractionOperator::new(spec, rho.grid());
    Ok(0.5 * spec.kappa * op.pairing(rho.values(), rho.values()))
}

/// Free energy `𝒢(ρ) = ∫ (ρ e(ρ) + ½ ρ Φ_α ∗ ρ)`.
pub fn free_energy(spec: &PotentialSpec, rho: &RadialField) -> Result<f64> {
    check_nonnegative(rho)?;
    Ok(InteractionOperator::new(spec, rho.grid()).free_energy(rho.values()))
}

/// Distance `d(ϱ, ρ̃)`; both densities must share a grid and their masses must agree to 1e−8.
pub fn distance_d(spec: &PotentialSpec, rho: &RadialField, rho_tilde: &RadialField) -> Result<f64> {
    check_nonnegative(rho)?;
    check_nonnegative(rho_tilde)?;
    if rho.grid() != rho_tilde.grid() {
        return domain("distance_d needs both densities on one grid");
    }
    let (m1, m2) = (mass(spec.n, rho), mass(spec.n, rho_tilde));
    if (m1 - m2).abs() > 1e-8 * m2.abs().max(f64::MIN_POSITIVE) {
        return domain(format!("mass mismatch in distance_d: {m1} vs {m2}"));
    }
    Ok(InteractionOperator::new(spec, rho.grid()).distance(rho.values(), rho_tilde.values()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ball(grid: &RadialGrid) -> RadialField {
        RadialField::from_fn(grid, |r| if r <= 1.0 + 1e-12 { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn internal_energy_of_unit_ball() {
        let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0).unwrap();
        let g = RadialGrid::uniform(1e-9, 1.0, 101).unwrap();
        let rho = RadialField::from_fn(&g, |_| 1.0).unwrap();
        assert!((internal_energy(&spec, &rho).unwrap() - PI / 6.0).abs() < 1e-7);
    }

    #[test]
    fn kinetic_energy_and_vacuum_convention() {
        let g = RadialGrid::uniform(1e-9, 1.0, 11).unwrap();
        let rho = RadialField::from_fn(&g, |_| 1.0).unwrap();
        let m = rho.clone();
        assert!((kinetic_energy(3, &rho, &m).unwrap() - 2.0 * PI / 3.0).abs() < 1e-7);
        let vac = RadialField::zeros(&g);
        assert_eq!(kinetic_energy(3, &vac, &vac).unwrap(), 0.0);
        assert!(matches!(kinetic_energy(3, &vac, &m), Err(Error::Vacuum(_))));
    }

    #[test]
    fn interaction_energy_is_negative_for_attractive_kernels() {
        let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0).unwrap();
        let g = RadialGrid::uniform(1e-6, 2.0, 801).unwrap();
        let e = interaction_energy(&spec, &ball(&g)).unwrap();
        // Newtonian self-energy of a uniform ball: −(3/5) M²/R.
        let m = 4.0 * PI / 3.0;
        let exact = -0.6 * m * m;
        assert!(e < 0.0);
        assert!((e - exact).abs() < 0.02 * exact.abs(), "{e} vs {exact}");
    }

    #[test]
    fn distance_vanishes_on_the_diagonal_and_rejects_mass_mismatch() {
        let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0).unwrap();
        let g = RadialGrid::uniform(1e-6, 2.0, 41).unwrap();
        let rho = RadialField::from_fn(&g, |r| (-r * r).exp()).unwrap();
        assert!(distance_d(&spec, &rho, &rho).unwrap().abs() < 1e-14);
        let other = rho.map(|v| 2.0 * v);
        assert!(distance_d(&spec, &other, &rho).is_err());
    }
}
