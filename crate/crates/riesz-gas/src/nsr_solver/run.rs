//! Time loops: single runs with sampled diagnostics and the vanishing-viscosity sweep.

use super::diagnostics::{diagnostics, DiagnosticsRow};
use super::initial_data::build_initial_data;
use super::scheme::Integrator;
use super::state::{shell_volume, FluidState};
use super::SolverConfig;
use crate::error::{domain, Error, Result};
use crate::grid::RadialField;
use crate::radial_kernel::surface_area_unchecked;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Output of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Diagnostics every `output_every` steps, at the start and at the end.
    pub rows: Vec<DiagnosticsRow>,
    /// States at the same instants as `rows`.
    pub snapshots: Vec<FluidState>,
    /// States at the requested checkpoint times, hit exactly.
    pub checkpoints: Vec<FluidState>,
    /// Last state reached.
    pub final_state: FluidState,
    /// Number of accepted steps.
    pub steps: usize,
}

/// Runs to `config.t_final`, returning the trajectory or the first error.
pub fn run(config: &SolverConfig, initial: &FluidState) -> Result<Trajectory> {
    let (traj, err) = run_partial(config, initial, &[])?;
    match err {
        Some(e) => Err(e),
        None => Ok(traj),
    }
}

/// Runs to `config.t_final`, landing exactly on each time of `checkpoints`.
///
/// A blow-up or a step budget overrun ends the run early; the partial
/// trajectory is returned together with the error so that callers can still
/// write the samples gathered so far. Invalid input fails outright.
pub fn run_partial(
    config: &SolverConfig,
    initial: &FluidState,
    checkpoints: &[f64],
) -> Result<(Trajectory, Option<Error>)> {
    let mut integrator = Integrator::new(config)?;
    if initial.n != config.spec.n {
        return domain("state and configuration disagree on the dimension");
    }
    if checkpoints.windows(2).any(|w| !(w[1] > w[0]))
        || checkpoints
            .iter()
            .any(|&t| t < initial.t || t > config.t_final)
    {
        return domain("checkpoints must be increasing and lie in [t0, t_final]");
    }
    let eps = config.epsilon;
    let mut state = initial.clone();
    let mut rows = vec![diagnostics(&config.spec, eps, &state)];
    let mut snapshots = vec![state.clone()];
    let mut stored = Vec::with_capacity(checkpoints.len());
    let mut next_checkpoint = 0;
    while next_checkpoint < checkpoints.len() && checkpoints[next_checkpoint] <= state.t {
        stored.push(state.clone());
        next_checkpoint += 1;
    }
    let mut steps = 0;
    let mut failure = None;
    while state.t < config.t_final {
        if steps >= config.max_steps {
            failure = Some(Error::NonConvergence {
                iterations: steps,
                residual: config.t_final - state.t,
            });
            break;
        }
        let target = checkpoints
            .get(next_checkpoint)
            .copied()
            .unwrap_or(config.t_final);
        let mut dt = integrator.stable_dt(&state);
        let remaining = target - state.t;
        let lands = dt >= remaining;
        if lands {
            dt = remaining;
        }
        match integrator.step(&state, dt) {
            Ok((mut next, taken)) => {
                if lands && taken == dt {
                    next.t = target;
                }
                state = next;
                steps += 1;
                if next_checkpoint < checkpoints.len() && state.t >= checkpoints[next_checkpoint] {
                    stored.push(state.clone());
                    next_checkpoint += 1;
                }
                if steps % config.output_every == 0 || state.t >= config.t_final {
                    rows.push(diagnostics(&config.spec, eps, &state));
                    snapshots.push(state.clone());
                }
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    if failure.is_some() && snapshots.last().map(|s| s.t) != Some(state.t) {
        rows.push(diagnostics(&config.spec, eps, &state));
        snapshots.push(state.clone());
    }
    Ok((
        Trajectory {
            rows,
            snapshots,
            checkpoints: stored,
            final_state: state,
            steps,
        },
        failure,
    ))
}

/// `(ω_n ∫ |ρ_a − ρ_b|^q r^{n−1} dr)^{1/q}` for two cell-constant densities,
/// each extended by zero outside its own annulus. Exact for piecewise constants.
pub fn lq_distance(a: &FluidState, b: &FluidState, q: f64) -> Result<f64> {
    lq_distance_within(a, b, q, f64::INFINITY)
}

/// [`lq_distance`] restricted to the ball `r ≤ radius`.
pub fn lq_distance_within(a: &FluidState, b: &FluidState, q: f64, radius: f64) -> Result<f64> {
    if a.n != b.n || !(q >= 1.0) || !(radius > 0.0) {
        return domain("distance needs equal dimensions and q >= 1");
    }
    let n = a.n;
    let mut breaks: Vec<f64> = a.r.iter().chain(&b.r).map(|&r| r.min(radius)).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let value = |s: &FluidState, r: f64| -> f64 {
        if r <= s.r[0] || r >= s.b_t {
            return 0.0;
        }
        let c = s.r.partition_point(|&e| e <= r) - 1;
        s.rho[c]
    };
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let d = (value(a, mid) - value(b, mid)).abs();
        if d > 0.0 {
            total += d.powf(q) * shell_volume(n, w[0], w[1]);
        }
    }
    Ok((surface_area_unchecked(n) * total).powf(1.0 / q))
}

/// Distances between the runs for two neighbouring viscosities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPair {
    /// Larger viscosity.
    pub eps_a: f64,
    /// Smaller viscosity.
    pub eps_b: f64,
    /// `L¹` distance of the densities on `r ≤ window` at each matched time.
    pub l1: Vec<f64>,
    /// `L^γ` distance of the densities on `r ≤ window` at each matched time.
    pub lgamma: Vec<f64>,
    /// `L¹` distance over the whole annulus, boundary layer included.
    pub l1_full: Vec<f64>,
}

/// Pairwise distances of a vanishing-viscosity sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    /// Viscosities, decreasing.
    pub epsilons: Vec<f64>,
    /// Matched times.
    pub times: Vec<f64>,
    /// Radius `b − 1` inside which the initial data are free of the boundary layer.
    pub window: f64,
    /// One entry per neighbouring pair.
    pub pairs: Vec<SweepPair>,
    /// Whether the final-time `L¹` distances decrease along the sweep.
    pub cauchy: bool,
}

/// Runs the same data `(ρ₀, m₀)` for every viscosity in `eps_list` (decreasing)
/// and reports `L¹` and `L^γ` distances of neighbouring runs at `times`.
///
/// The outer layer `[b − 1, b]` carries the prescribed boundary density and a
/// velocity correction of size `1/ε`, so it differs between viscosities by
/// construction; the main distances are therefore taken on `r ≤ b − 1` and the
/// whole-annulus `L¹` distance is reported alongside.
pub fn vanishing_viscosity_sweep(
    config: &SolverConfig,
    rho0: &RadialField,
    m0: &RadialField,
    eps_list: &[f64],
    times: &[f64],
) -> Result<SweepReport> {
    if eps_list.is_empty() || eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return domain("eps_list must be nonempty and strictly decreasing");
    }
    if times.is_empty() {
        return domain("at least one comparison time is required");
    }
    let runs: Vec<Result<Vec<FluidState>>> = eps_list
        .par_iter()
        .map(|&eps| {
            let cfg = SolverConfig {
                epsilon: eps,
                ..*config
            };
            let init = build_initial_data(&cfg.spec, rho0, m0, eps, cfg.b, cfg.cells)?;
            let (traj, err) = run_partial(&cfg, &init, times)?;
            match err {
                Some(e) => Err(e),
                None => Ok(traj.checkpoints),
            }
        })
        .collect();
    let runs: Vec<Vec<FluidState>> = runs.into_iter().collect::<Result<_>>()?;
    let gamma = config.spec.gamma;
    let window = config.b - 1.0;
    let mut pairs = Vec::new();
    for k in 0..runs.len().saturating_sub(1) {
        let mut l1 = Vec::with_capacity(times.len());
        let mut lg = Vec::with_capacity(times.len());
        let mut full = Vec::with_capacity(times.len());
        for (a, b) in runs[k].iter().zip(&runs[k + 1]) {
            l1.push(lq_distance_within(a, b, 1.0, window)?);
            lg.push(lq_distance_within(a, b, gamma, window)?);
            full.push(lq_distance(a, b, 1.0)?);
        }
        pairs.push(SweepPair {
            eps_a: eps_list[k],
            eps_b: eps_list[k + 1],
            l1,
            lgamma: lg,
            l1_full: full,
        });
    }
    let finals: Vec<f64> = pairs
        .iter()
        .map(|p| *p.l1.last().expect("nonempty"))
        .collect();
    let cauchy = finals.windows(2).all(|w| w[1] < w[0]);
    Ok(SweepReport {
        epsilons: eps_list.to_vec(),
        times: times.to_vec(),
        window,
        pairs,
        cauchy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_is_a_metric_on_samples() {
        let a = FluidState::from_profile(3, &|r| 1.0 + r, &|_| 0.0, 0.2, 1.0, 16, 0.5).unwrap();
        let b = FluidState::from_profile(3, &|r| 2.0 - r, &|_| 0.0, 0.25, 1.2, 20, 0.5).unwrap();
        assert_eq!(lq_distance(&a, &a, 1.0).unwrap(), 0.0);
        let ab = lq_distance(&a, &b, 2.0).unwrap();
        let ba = lq_distance(&b, &a, 2.0).unwrap();
        assert!((ab - ba).abs() < 1e-14 && ab > 0.0);
        let l1_vs_zero = lq_distance(
            &a,
            &FluidState::from_profile(3, &|_| 1e-300, &|_| 0.0, 5.0, 6.0, 16, 0.0).unwrap(),
            1.0,
        )
        .unwrap();
        assert!((l1_vs_zero - a.mass()).abs() < 1e-12 * a.mass());
    }
}
