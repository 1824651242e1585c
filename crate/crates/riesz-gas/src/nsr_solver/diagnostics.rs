//! Monitored quantities of a Lagrangian snapshot.

use super::state::FluidState;
use crate::functionals::EnergyBreakdown;
use crate::kernel_matrix::{KernelKind, KernelMatrix};
use crate::quadrature;
use crate::radial_kernel::{coulomb_k, k_alpha, surface_area_unchecked, PotentialSpec};
use serde::{Deserialize, Serialize};

/// Column names of the diagnostics stream.
pub const DIAGNOSTICS_HEADER: &str =
    "t,mass,E_kin,E_int,E_pot,E_tot,bd_entropy,boundary_pressure,b_t,min_rho,dissipation_rate";

/// Gauss-Legendre order of the per-cell interaction integrals.
const CELL_NODES: usize = 8;

/// One sample of the diagnostics stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRow {
    /// Time.
    pub t: f64,
    /// Total mass `ω_n x_N`.
    pub mass: f64,
    /// Kinetic, internal and interaction energy, and the `k_α` moment when `α ≤ 0`.
    pub energy: EnergyBreakdown,
    /// `ε² ∫ |(√ρ)_r|² r^{n−1} dr`.
    pub bd_entropy: f64,
    /// Normal stress `p − ε ρ² (r^{n−1} u)_x` in the outermost cell.
    pub boundary_pressure: f64,
    /// Outer radius.
    pub b_t: f64,
    /// Smallest cell density.
    pub min_rho: f64,
    /// Rate of viscous energy dissipation of the discrete scheme.
    pub dissipation_rate: f64,
}

impl DiagnosticsRow {
    /// Values in the column order of [`DIAGNOSTICS_HEADER`].
    pub fn columns(&self) -> [f64; 11] {
        [
            self.t,
            self.mass,
            self.energy.kinetic,
            self.energy.internal,
            self.energy.interaction,
            self.energy.total,
            self.bd_entropy,
            self.boundary_pressure,
            self.b_t,
            self.min_rho,
            self.dissipation_rate,
        ]
    }
}

/// Computes every monitored quantity of `state` for viscosity `epsilon`.
///
/// Kinetic energy uses the edge masses, internal energy the cell masses. The
/// interaction energy is exact for piecewise constant densities when `α = n − 2`
/// (nested shells) and uses the cell-average potential otherwise. The dissipation
/// rate is the exact energy loss rate of the discrete viscous operator.
pub fn diagnostics(spec: &PotentialSpec, epsilon: f64, state: &FluidState) -> DiagnosticsRow {
    let n = state.n;
    let nc = state.cells();
    let w = surface_area_unchecked(n);
    let kinetic = w
        * (1..=nc)
            .map(|i| 0.5 * edge_mass(state, i) * state.u[i] * state.u[i])
            .sum::<f64>();
    let internal = w
        * (0..nc)
            .map(|c| state.dx[c] * spec.internal_energy_density(state.rho[c]))
            .sum::<f64>();
    let interaction = 0.5 * spec.kappa * w * pairing(spec, state);
    let mut energy = EnergyBreakdown::new(kinetic, internal, interaction);
    let centers = state.centers();
    if spec.alpha <= 0.0 {
        energy.moment = Some(
            w * (0..nc)
                .map(|c| state.dx[c] * k_alpha(spec.alpha, 1.0 + centers[c] * centers[c]))
                .sum::<f64>(),
        );
    }
    let bd = bd_functional(epsilon, state);
    energy.bd_entropy = Some(bd);
    let area = |i: usize| state.r[i].powi(n as i32 - 1);
    let last = nc - 1;
    let div = area(nc) * state.u[nc] - area(last) * state.u[last];
    let boundary_pressure = spec.pressure(state.rho[last])
        - epsilon * state.rho[last] * state.rho[last] * div / state.dx[last];
    DiagnosticsRow {
        t: state.t,
        mass: state.mass(),
        energy,
        bd_entropy: bd,
        boundary_pressure,
        b_t: state.b_t,
        min_rho: state.min_rho(),
        dissipation_rate: w * dissipation(epsilon, state),
    }
}

pub(crate) fn edge_mass(state: &FluidState, i: usize) -> f64 {
    let nc = state.cells();
    if i < nc {
        0.5 * (state.dx[i - 1] + state.dx[i])
    } else {
        0.5 * state.dx[nc - 1]
    }
}

/// `∫ ρ Φ_α ∗ ρ r^{n−1} dr` for the cell-constant density.
fn pairing(spec: &PotentialSpec, state: &FluidState) -> f64 {
    let n = state.n;
    if spec.is_coulomb() {
        let mut total = 0.0;
        for c in 0..state.cells() {
            let (a, b, rho) = (state.r[c], state.r[c + 1], state.rho[c]);
            let x0 = state.x[c];
            total += quadrature::fixed(CELL_NODES, a, b, |r| {
                let inside = x0 + rho * super::state::shell_volume(n, a, r);
                rho * r.powi(n as i32 - 1) * coulomb_k(n, r, 0.0) * inside
            });
        }
        2.0 * total
    } else {
        let centers = state.centers();
        let m = KernelMatrix::cells(spec, &centers, &state.r, KernelKind::Potential);
        let phi = m.apply(&state.rho);
        state.dx.iter().zip(&phi).map(|(d, p)| d * p).sum()
    }
}

/// `ε² ∫ |(√ρ)_r|² r^{n−1} dr` with differences between neighbouring cell centres.
fn bd_functional(epsilon: f64, state: &FluidState) -> f64 {
    let n = state.n;
    let centers = state.centers();
    let mut total = 0.0;
    for c in 0..state.cells() - 1 {
        let (a, b) = (centers[c], centers[c + 1]);
        let g = (state.rho[c + 1].sqrt() - state.rho[c].sqrt()) / (b - a);
        total += g * g * super::state::shell_volume(n, a, b);
    }
    epsilon * epsilon * total
}

/// Energy loss rate of the viscous operator (without the factor `ω_n`):
/// `Σ_c k_c (Δ(r^{n−1}u))_c² + (n−1) ε [Σ_c ρ_c (s_c u_c² − s_{c+1} u_{c+1}²) + ρ_{N−1} s_N u_N²]`
/// with `k_c = ε ρ_c²/dx_c` and `s = r^{n−2}`.
pub(crate) fn dissipation(epsilon: f64, state: &FluidState) -> f64 {
    let n = state.n;
    let nc = state.cells();
    let area = |i: usize| state.r[i].powi(n as i32 - 1);
    let curv = |i: usize| state.r[i].powi(n as i32 - 2);
    let mut total = 0.0;
    for c in 0..nc {
        let rho = state.rho[c];
        let div = area(c + 1) * state.u[c + 1] - area(c) * state.u[c];
        let shear =
            curv(c) * state.u[c] * state.u[c] - curv(c + 1) * state.u[c + 1] * state.u[c + 1];
        total += rho * (rho * div * div / state.dx[c] + (n as f64 - 1.0) * shear);
    }
    total += (n as f64 - 1.0) * state.rho[nc - 1] * curv(nc) * state.u[nc] * state.u[nc];
    epsilon * total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_ball(n: usize) -> FluidState {
        FluidState::from_profile(n, &|_| 1.0, &|_| 0.0, 1e-9, 1.0, 64, 0.0).unwrap()
    }

    #[test]
    fn coulomb_self_energy_of_a_ball() {
        let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0).unwrap();
        let s = uniform_ball(3);
        let row = diagnostics(&spec, 0.1, &s);
        let exact = -16.0 * std::f64::consts::PI.powi(2) / 15.0;
        assert!((row.energy.interaction - exact).abs() < 1e-10 * exact.abs());
        assert_eq!(row.energy.kinetic, 0.0);
        assert!(row.bd_entropy < 1e-20);
    }

    #[test]
    fn dissipation_of_rigid_expansion() {
        let s = FluidState::from_profile(3, &|_| 2.0, &|r| r, 0.5, 1.5, 32, 0.0).unwrap();
        let d = dissipation(0.1, &s);
        assert!(d > 0.0);
    }

    #[test]
    fn dissipation_is_nonnegative_for_random_velocities() {
        let mut s = FluidState::from_profile(2, &|r| 1.0 + r, &|_| 0.0, 0.3, 2.0, 24, 0.3).unwrap();
        for k in 0..200 {
            let u: Vec<f64> = (0..s.r.len())
                .map(|i| ((i * 7 + k * 13) as f64).sin())
                .collect();
            s = s.with_motion(s.r.clone(), u, 0.0);
            s.u[0] = 0.0;
            assert!(dissipation(1.0, &s) >= -1e-12);
        }
    }
}
