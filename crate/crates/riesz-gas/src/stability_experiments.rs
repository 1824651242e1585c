//! Perturbations of steady states and the stability functional along viscous runs.
//!
//! A steady state is perturbed, converted to a Lagrangian state on its own
//! support, evolved with the free-boundary solver at small viscosity, and mapped
//! back to a fixed Eulerian grid where
//! `d(ρ, ρ̃) + ‖ρ − ρ̃‖²_{L^{2n/(2n−α)}} + ½∫ρu²` is evaluated.

use crate::error::{domain, Result};
use crate::functionals::{hls_constant, InteractionOperator};
use crate::grid::{RadialField, RadialGrid};
use crate::nsr_solver::{diagnostics, run_partial, FluidState, SolverConfig};
use crate::radial_kernel::PotentialSpec;
use crate::steady_states::SteadyState;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default viscosity of stability runs.
pub const DEFAULT_EPSILON: f64 = 1e-3;
/// Nodes of the Eulerian grid on which the functional is evaluated.
const EVAL_NODES: usize = 241;
/// Weight of equal-mass positions when placing the Lagrangian edges.
const EDGE_BLEND: f64 = 0.5;

/// Shape of a perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerturbationMode {
    /// `ρ̃ (1 + a cos(π r/R))`, renormalised to the original mass.
    Bump,
    /// `(1+a)ⁿ ρ̃((1+a) r)`, renormalised against interpolation error.
    Squeeze,
    /// Density unchanged, velocity `a r` on the support.
    Velocity,
}

impl std::str::FromStr for PerturbationMode {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bump" => Ok(Self::Bump),
            "squeeze" => Ok(Self::Squeeze),
            "velocity" => Ok(Self::Velocity),
            other => domain(format!(
                "unknown perturbation mode '{other}' (bump, squeeze, velocity)"
            )),
        }
    }
}

/// A perturbation mode with its amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    /// Shape.
    pub mode: PerturbationMode,
    /// Amplitude `a ≥ 0`.
    pub amplitude: f64,
}

/// Last node where the profile is positive, or the last node of the grid.
fn profile_end(rho: &RadialField) -> f64 {
    let nodes = rho.grid().nodes();
    let v = rho.values();
    match v.iter().rposition(|&x| x > 0.0) {
        Some(k) if k + 1 < nodes.len() => nodes[k + 1],
        _ => rho.grid().last(),
    }
}

/// Perturbed density and momentum `(ρ₀, m₀)` on the grid of `rho_tilde`.
///
/// Density modes keep the mass of `rho_tilde`; amplitude zero returns
/// `(ρ̃, 0)` exactly.
pub fn perturb(
    n: usize,
    rho_tilde: &RadialField,
    mode: PerturbationMode,
    amplitude: f64,
) -> Result<(RadialField, RadialField)> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return domain(format!(
            "perturbation amplitude must be finite and nonnegative, got {amplitude}"
        ));
    }
    let zero = RadialField::zeros(rho_tilde.grid());
    if amplitude == 0.0 {
        return Ok((rho_tilde.clone(), zero));
    }
    let mass = rho_tilde.space_integral(n);
    let radius = profile_end(rho_tilde);
    let nodes = rho_tilde.grid().nodes();
    let renormalise = |values: Vec<f64>| -> Result<RadialField> {
        if values.iter().any(|&v| v < 0.0) {
            return domain(format!("amplitude {amplitude} produces a negative density"));
        }
        let f = rho_tilde.with_values(values)?;
        let scale = mass / f.space_integral(n);
        Ok(f.map(|v| v * scale))
    };
    match mode {
        PerturbationMode::Bump => {
            let v = nodes
                .iter()
                .zip(rho_tilde.values())
                .map(|(&r, &rho)| {
                    rho * (1.0 + amplitude * (std::f64::consts::PI * r / radius).cos())
                })
                .collect();
            Ok((renormalise(v)?, zero))
        }
        PerturbationMode::Squeeze => {
            let s = 1.0 + amplitude;
            let v = nodes
                .iter()
                .map(|&r| s.powi(n as i32) * rho_tilde.eval(s * r))
                .collect();
            Ok((renormalise(v)?, zero))
        }
        PerturbationMode::Velocity => {
            let m = nodes
                .iter()
                .zip(rho_tilde.values())
                .map(|(&r, &rho)| if rho > 0.0 { amplitude * r * rho } else { 0.0 })
                .collect();
            Ok((rho_tilde.clone(), rho_tilde.with_values(m)?))
        }
    }
}

/// The three parts of the stability functional and the interaction cross term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalParts {
    /// `∫ (ρe(ρ) − ρ̃e(ρ̃)) + ∫ (Φ_α∗ρ̃ − λ)(ρ − ρ̃)`.
    pub d: f64,
    /// `‖ρ − ρ̃‖²_{L^{2n/(2n−α)}}`.
    pub norm_sq: f64,
    /// `½ ∫ ρ u²`.
    pub kinetic: f64,
    /// `∫ (ρ − ρ̃) Φ_α ∗ (ρ − ρ̃)`.
    pub cross: f64,
}

impl FunctionalParts {
    /// `d + ‖ρ − ρ̃‖² + kinetic`.
    pub fn value(&self) -> f64 {
        self.d + self.norm_sq + self.kinetic
    }
}

/// Evaluates the functional parts for nodal densities on the operator grid.
pub fn functional_parts(
    spec: &PotentialSpec,
    op: &InteractionOperator,
    rho: &[f64],
    rho_tilde: &[f64],
    lambda: f64,
    kinetic: f64,
) -> FunctionalParts {
    let n = spec.n as f64;
    let p = 2.0 * n / (2.0 * n - spec.alpha);
    let diff: Vec<f64> = rho.iter().zip(rho_tilde).map(|(a, b)| a - b).collect();
    let d = op.distance(rho, rho_tilde) - lambda * op.integrate(&diff);
    let norm_sq = op
        .integrate(&diff.iter().map(|v| v.abs().powf(p)).collect::<Vec<_>>())
        .powf(2.0 / p);
    let cross = op.pairing(&diff, &diff);
    FunctionalParts {
        d,
        norm_sq,
        kinetic,
        cross,
    }
}

/// Constant `C_{n,α}/α` bounding `|∫ δ Φ_α∗δ|` by `‖δ‖²_{L^{2n/(2n−α)}}`.
pub fn cross_term_constant(n: usize, alpha: f64) -> Result<f64> {
    Ok(hls_constant(n, alpha)? / alpha)
}

/// Summary of one stability experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Perturbation applied to the steady state.
    pub perturbation: Perturbation,
    /// Output times.
    pub times: Vec<f64>,
    /// Functional at each output time.
    pub functional: Vec<f64>,
    /// `d` part at each output time.
    pub d: Vec<f64>,
    /// Norm part at each output time.
    pub norm_sq: Vec<f64>,
    /// Kinetic part at each output time.
    pub kinetic: Vec<f64>,
    /// Functional at `t = 0`.
    pub initial_value: f64,
    /// Largest functional value.
    pub max_value: f64,
    /// `max_value / initial_value`.
    pub ratio: f64,
    /// Relative defect of `E(ρ₀, m₀) − 𝒢(ρ̃) = d + ½∫δΦ_α∗δ + kinetic` on the steady grid.
    pub identity_defect: f64,
    /// Largest `|∫δΦ_α∗δ| / (C_{n,α}/α ‖δ‖²)` over all samples (zero for `δ = 0`).
    pub cross_term_ratio: f64,
    /// Number of samples violating the cross-term bound.
    pub cross_term_violations: usize,
    /// Functional of the unperturbed state after the transfer to cells and back.
    pub projection_floor: f64,
    /// Accepted solver steps.
    pub steps: usize,
    /// Solver error that ended the run early, if any.
    pub aborted: Option<String>,
    /// The same error, kept typed for exit-code mapping.
    #[serde(skip)]
    pub abort_error: Option<crate::error::Error>,
}

/// Checks the parameter range of the stability theorem.
pub fn check_stability_regime(spec: &PotentialSpec) -> Result<()> {
    let n = spec.n as f64;
    if spec.kappa != 1.0
        || !(spec.alpha > 0.0 && spec.alpha < n - 1.0)
        || !(spec.gamma > (n + spec.alpha) / n)
    {
        return domain(
            "stability runs need kappa = 1, 0 < alpha < n - 1 and gamma > (n + alpha)/n",
        );
    }
    Ok(())
}

/// Lagrangian state for nodal data `(ρ, m)` on the support `[r_0, R]` of `rho`.
pub fn lagrangian_state(
    n: usize,
    rho: &RadialField,
    m: &RadialField,
    cells: usize,
) -> Result<FluidState> {
    let inner = rho.grid().first();
    let outer = profile_end(rho);
    let u = |r: f64| {
        let d = rho.eval(r);
        if d > 0.0 {
            m.eval(r) / d
        } else {
            0.0
        }
    };
    FluidState::from_profile(n, &|r| rho.eval(r), &u, inner, outer, cells, EDGE_BLEND)
}

/// Nodal values of the cell-constant density of `state` on `grid`: linear between
/// cell centres, constant from the last centre to the outer edge, zero beyond.
pub fn map_to_grid(state: &FluidState, grid: &RadialGrid) -> Vec<f64> {
    let centers = state.centers();
    let last = centers.len() - 1;
    grid.nodes()
        .iter()
        .map(|&r| {
            if r < state.r[0] || r > state.b_t {
                0.0
            } else if r <= centers[0] {
                state.rho[0]
            } else if r >= centers[last] {
                state.rho[last]
            } else {
                let k = centers.partition_point(|&c| c <= r) - 1;
                let t = (r - centers[k]) / (centers[k + 1] - centers[k]);
                state.rho[k] * (1.0 - t) + state.rho[k + 1] * t
            }
        })
        .collect()
}

/// Perturbs `steady`, evolves it with `solver` and tracks the stability functional.
///
/// `solver.b` is unused: the run starts on the support of the perturbed
/// density with a wall at the first grid node and a free vacuum boundary.
pub fn stability_run(
    spec: &PotentialSpec,
    steady: &SteadyState,
    perturbation: Perturbation,
    solver: &SolverConfig,
) -> Result<StabilityReport> {
    check_stability_regime(spec)?;
    let n = spec.n;
    let rho_tilde = &steady.profile;
    let (rho0, m0) = perturb(n, rho_tilde, perturbation.mode, perturbation.amplitude)?;
    let identity_defect = relative_energy_defect(spec, steady, &rho0, &m0)?;

    let config = SolverConfig {
        spec: *spec,
        ..*solver
    };
    let initial = lagrangian_state(n, &rho0, &m0, config.cells)?;
    let (traj, err) = run_partial(&config, &initial, &[])?;

    let reach = traj
        .snapshots
        .iter()
        .map(|s| s.b_t)
        .fold(profile_end(rho_tilde), f64::max);
    let grid = RadialGrid::uniform(rho_tilde.grid().first(), reach * 1.05, EVAL_NODES)?;
    let op = InteractionOperator::new(spec, &grid);
    let tilde: Vec<f64> = grid.nodes().iter().map(|&r| rho_tilde.eval(r)).collect();
    let c = cross_term_constant(n, spec.alpha)?;

    let reference = lagrangian_state(
        n,
        rho_tilde,
        &RadialField::zeros(rho_tilde.grid()),
        config.cells,
    )?;
    let projection_floor = functional_parts(
        spec,
        &op,
        &map_to_grid(&reference, &grid),
        &tilde,
        steady.lambda,
        0.0,
    )
    .value();

    let parts: Vec<(f64, FunctionalParts)> = traj
        .snapshots
        .par_iter()
        .map(|s| {
            let kinetic = diagnostics(spec, config.epsilon, s).energy.kinetic;
            (
                s.t,
                functional_parts(
                    spec,
                    &op,
                    &map_to_grid(s, &grid),
                    &tilde,
                    steady.lambda,
                    kinetic,
                ),
            )
        })
        .collect();
    let mut report = StabilityReport {
        perturbation,
        times: Vec::with_capacity(parts.len()),
        functional: Vec::with_capacity(parts.len()),
        d: Vec::with_capacity(parts.len()),
        norm_sq: Vec::with_capacity(parts.len()),
        kinetic: Vec::with_capacity(parts.len()),
        initial_value: 0.0,
        max_value: 0.0,
        ratio: 0.0,
        identity_defect,
        cross_term_ratio: 0.0,
        cross_term_violations: 0,
        projection_floor,
        steps: traj.steps,
        aborted: err.as_ref().map(|e| e.to_string()),
        abort_error: err,
    };
    for (t, p) in &parts {
        report.times.push(*t);
        report.functional.push(p.value());
        report.d.push(p.d);
        report.norm_sq.push(p.norm_sq);
        report.kinetic.push(p.kinetic);
        if p.norm_sq > 0.0 {
            let ratio = p.cross.abs() / (c * p.norm_sq);
            report.cross_term_ratio = report.cross_term_ratio.max(ratio);
            if ratio > 1.0 {
                report.cross_term_violations += 1;
            }
        }
    }
    report.initial_value = report.functional[0];
    report.max_value = report
        .functional
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    report.ratio = report.max_value / report.initial_value;
    Ok(report)
}

/// Relative defect of `E(ρ₀, m₀) − 𝒢(ρ̃) = d + ½∫δΦ_α∗δ + kinetic` on the grid of the steady state.
pub fn relative_energy_defect(
    spec: &PotentialSpec,
    steady: &SteadyState,
    rho0: &RadialField,
    m0: &RadialField,
) -> Result<f64> {
    let op = InteractionOperator::new(spec, steady.profile.grid());
    let tilde = steady.profile.values();
    let kinetic = crate::functionals::kinetic_energy(spec.n, rho0, m0)?;
    let lhs = kinetic + op.free_energy(rho0.values()) - op.free_energy(tilde);
    let parts = functional_parts(spec, &op, rho0.values(), tilde, 0.0, kinetic);
    let rhs = parts.d + 0.5 * parts.cross + kinetic;
    let scale = lhs.abs().max(rhs.abs());
    Ok(if scale > 0.0 {
        (lhs - rhs).abs() / scale
    } else {
        0.0
    })
}

/// Runs one experiment per amplitude in parallel.
pub fn stability_scan(
    spec: &PotentialSpec,
    steady: &SteadyState,
    mode: PerturbationMode,
    amplitudes: &[f64],
    solver: &SolverConfig,
) -> Result<Vec<StabilityReport>> {
    amplitudes
        .par_iter()
        .map(|&a| stability_run(spec, steady, Perturbation { mode, amplitude: a }, solver))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> RadialField {
        let g = RadialGrid::uniform(1e-6, 1.0, 201).unwrap();
        RadialField::from_fn(&g, |r| {
            if r < 0.5 {
                (1.0 - 4.0 * r * r).powi(2)
            } else {
                0.0
            }
        })
        .unwrap()
    }

    #[test]
    fn zero_amplitude_is_exact() {
        let rho = profile();
        let (r0, m0) = perturb(3, &rho, PerturbationMode::Bump, 0.0).unwrap();
        assert_eq!(r0, rho);
        assert!(m0.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn density_modes_keep_mass() {
        let rho = profile();
        let mass = rho.space_integral(3);
        for mode in [PerturbationMode::Bump, PerturbationMode::Squeeze] {
            let (r0, _) = perturb(3, &rho, mode, 0.1).unwrap();
            assert!((r0.space_integral(3) - mass).abs() < 1e-12 * mass);
        }
        assert!(perturb(3, &rho, PerturbationMode::Bump, 1.5).is_err());
        assert!(perturb(3, &rho, PerturbationMode::Bump, -0.1).is_err());
    }

    #[test]
    fn velocity_mode_vanishes_off_support() {
        let rho = profile();
        let (r0, m0) = perturb(3, &rho, PerturbationMode::Velocity, 0.2).unwrap();
        assert_eq!(r0, rho);
        for (&v, &d) in m0.values().iter().zip(rho.values()) {
            assert!(d > 0.0 || v == 0.0);
        }
    }

    #[test]
    fn mapping_round_trip_preserves_constants() {
        let s = FluidState::from_profile(3, &|_| 2.0, &|_| 0.0, 0.1, 1.0, 32, 0.5).unwrap();
        let g = RadialGrid::uniform(0.1, 1.2, 50).unwrap();
        let v = map_to_grid(&s, &g);
        for (&r, &x) in g.nodes().iter().zip(&v) {
            let expect = if r <= 1.0 { 2.0 } else { 0.0 };
            assert!((x - expect).abs() < 1e-12, "{r} {x}");
        }
    }
}
