//! One time step: explicit pressure and force, implicit viscosity, Heun averaging.

use super::state::FluidState;
use super::{ForcePath, SolverConfig};
use crate::error::{Error, Result};
use crate::kernel_matrix::{KernelKind, KernelMatrix};
use crate::radial_kernel::surface_area_unchecked;

/// Densities below this value abort the run.
pub const DENSITY_FLOOR: f64 = 1e-14;
/// Number of times a step may be halved after producing crossing particle paths.
const MAX_HALVINGS: usize = 30;

/// Time integrator holding the force matrix between refreshes.
#[derive(Debug, Clone)]
pub struct Integrator {
    config: SolverConfig,
    matrix: Option<KernelMatrix>,
    steps_since_refresh: usize,
}

impl Integrator {
    /// Integrator for a validated configuration.
    pub fn new(config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config: *config,
            matrix: None,
            steps_since_refresh: 0,
        })
    }

    /// The configuration the integrator was built with.
    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// Force `(Φ_α ∗ ρ)_r` at every edge (zero at the wall).
    pub fn force(&mut self, state: &FluidState, rebuild: bool) -> Vec<f64> {
        let spec = &self.config.spec;
        let mut f = match self.config.force_path {
            ForcePath::CoulombLocal => {
                let w = surface_area_unchecked(state.n);
                state
                    .x
                    .iter()
                    .zip(&state.r)
                    .map(|(&x, &r)| w * x / r.powi(state.n as i32 - 1))
                    .collect()
            }
            path => {
                if rebuild || self.matrix.is_none() {
                    let kind = if path == ForcePath::Kernel {
                        KernelKind::Force
                    } else {
                        KernelKind::ForceQuadrature
                    };
                    self.matrix = Some(KernelMatrix::cells(spec, &state.r, &state.r, kind));
                }
                self.matrix
                    .as_ref()
                    .expect("matrix assembled")
                    .apply(&state.rho)
            }
        };
        f[0] = 0.0;
        f
    }

    /// Largest stable step: acoustic bound `cfl Δr/(|u| + c_s)` and force bound
    /// `cfl √(Δr/|F|)` over all cells, capped by `dt_max`.
    pub fn stable_dt(&mut self, state: &FluidState) -> f64 {
        let force = self.force(state, self.matrix.is_none());
        let spec = &self.config.spec;
        let mut dt = self.config.dt_max;
        for c in 0..state.cells() {
            let dr = state.r[c + 1] - state.r[c];
            let speed = state.u[c].abs().max(state.u[c + 1].abs()) + spec.sound_speed(state.rho[c]);
            if speed > 0.0 {
                dt = dt.min(self.config.cfl * dr / speed);
            }
            let acc = force[c + 1].abs() * spec.kappa.abs();
            if acc > 0.0 {
                dt = dt.min(self.config.cfl * (dr / acc).sqrt());
            }
        }
        dt
    }

    /// Advances `state` by `dt`, halving the step while particle paths cross.
    /// Returns the new state and the step actually taken.
    pub fn step(&mut self, state: &FluidState, dt: f64) -> Result<(FluidState, f64)> {
        let refresh = self.steps_since_refresh == 0
            || self.steps_since_refresh >= self.config.force_refresh_every;
        if refresh {
            self.steps_since_refresh = 0;
        }
        let mut h = dt;
        for _ in 0..=MAX_HALVINGS {
            match self.heun(state, h, refresh) {
                Ok(next) => {
                    self.steps_since_refresh += 1;
                    check_floor(&next)?;
                    return Ok((next, h));
                }
                Err(StageFailure::Crossing) => h *= 0.5,
                Err(StageFailure::NonFinite) => {
                    return Err(Error::BlowUp {
                        t: state.t,
                        reason: "non-finite values in the update".into(),
                    })
                }
            }
        }
        Err(Error::BlowUp {
            t: state.t,
            reason: format!("particle paths cross even with dt = {h:e}"),
        })
    }

    fn heun(
        &mut self,
        s0: &FluidState,
        dt: f64,
        refresh: bool,
    ) -> std::result::Result<FluidState, StageFailure> {
        let every_stage = self.config.force_refresh_every == 1;
        let s1 = self.stage(s0, dt, refresh || every_stage)?;
        let s2 = self.stage(&s1, dt, every_stage)?;
        let r: Vec<f64> = s0.r.iter().zip(&s2.r).map(|(a, b)| 0.5 * (a + b)).collect();
        let u: Vec<f64> = s0.u.iter().zip(&s2.u).map(|(a, b)| 0.5 * (a + b)).collect();
        admissible(&r)?;
        Ok(s0.with_motion(r, u, s0.t + dt))
    }

    fn stage(
        &mut self,
        s: &FluidState,
        dt: f64,
        rebuild: bool,
    ) -> std::result::Result<FluidState, StageFailure> {
        let force = self.force(s, rebuild);
        let spec = self.config.spec;
        let eps = self.config.epsilon;
        let n = s.n;
        let nc = s.cells();
        let area: Vec<f64> = s.r.iter().map(|&r| r.powi(n as i32 - 1)).collect();
        let curv: Vec<f64> = s.r.iter().map(|&r| r.powi(n as i32 - 2)).collect();
        let p: Vec<f64> = s.rho.iter().map(|&rho| spec.pressure(rho)).collect();
        let k: Vec<f64> = (0..nc)
            .map(|c| eps * s.rho[c] * s.rho[c] / s.dx[c])
            .collect();
        let (mut lower, mut diag, mut upper, mut rhs) =
            (vec![0.0; nc], vec![0.0; nc], vec![0.0; nc], vec![0.0; nc]);
        for i in 1..=nc {
            let row = i - 1;
            let inner_edge = i < nc;
            let dxe = if inner_edge {
                0.5 * (s.dx[i - 1] + s.dx[i])
            } else {
                0.5 * s.dx[nc - 1]
            };
            let (p_out, rho_out, k_out) = if inner_edge {
                (p[i], s.rho[i], k[i])
            } else {
                (0.0, s.rho[nc - 1], 0.0)
            };
            let explicit = -area[i] * (p_out - p[i - 1]) / dxe - spec.kappa * force[i];
            let drag = (n as f64 - 1.0) * eps * curv[i] * (rho_out - s.rho[i - 1]) / dxe;
            diag[row] = 1.0 + dt * (area[i] * area[i] * (k_out + k[i - 1]) / dxe + drag);
            if i > 1 {
                lower[row] = -dt * area[i] * k[i - 1] * area[i - 1] / dxe;
            }
            if inner_edge {
                upper[row] = -dt * area[i] * k_out * area[i + 1] / dxe;
            }
            rhs[row] = s.u[i] + dt * explicit;
        }
        let sol = thomas(&lower, &diag, &upper, &rhs);
        let mut u = Vec::with_capacity(nc + 1);
        u.push(0.0);
        u.extend(sol);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(StageFailure::NonFinite);
        }
        let r: Vec<f64> = s.r.iter().zip(&u).map(|(r, v)| r + dt * v).collect();
        admissible(&r)?;
        Ok(s.with_motion(r, u, s.t + dt))
    }
}

/// Advances `state` by one step of size at most `dt` with a fresh integrator.
pub fn step(config: &SolverConfig, state: &FluidState, dt: f64) -> Result<FluidState> {
    let mut integrator = Integrator::new(config)?;
    integrator.step(state, dt).map(|(s, _)| s)
}

enum StageFailure {
    Crossing,
    NonFinite,
}

fn admissible(r: &[f64]) -> std::result::Result<(), StageFailure> {
    if r.iter().any(|v| !v.is_finite()) {
        return Err(StageFailure::NonFinite);
    }
    if r.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(StageFailure::Crossing);
    }
    Ok(())
}

fn check_floor(s: &FluidState) -> Result<()> {
    if s.rho.iter().any(|v| !v.is_finite()) {
        return Err(Error::BlowUp {
            t: s.t,
            reason: "non-finite density".into(),
        });
    }
    let m = s.min_rho();
    if m < DENSITY_FLOOR {
        return Err(Error::BlowUp {
            t: s.t,
            reason: format!("density {m:e} fell below the floor {DENSITY_FLOOR:e}"),
        });
    }
    Ok(())
}

/// Thomas algorithm for a tridiagonal system; `lower[0]` and `upper[last]` are ignored.
pub(crate) fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..m {
        let denom = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / denom;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = d[m - 1];
    for i in (0..m - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_kernel::PotentialSpec;

    #[test]
    fn thomas_solves_a_small_system() {
        let lower = [0.0, -1.0, -1.0];
        let diag = [4.0, 4.0, 4.0];
        let upper = [-1.0, -1.0, 0.0];
        let x = [1.0, 2.0, 3.0];
        let rhs = [4.0 - 2.0, -1.0 + 8.0 - 3.0, -2.0 + 12.0];
        let sol = thomas(&lower, &diag, &upper, &rhs);
        for (a, b) in sol.iter().zip(&x) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn one_step_keeps_mass_and_wall() {
        let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0).unwrap();
        let s = FluidState::from_profile(
            3,
            &|r| 1.0 + (-r * r).exp(),
            &|r| 0.1 * r,
            0.2,
            2.0,
            32,
            0.5,
        )
        .unwrap();
        let cfg = SolverConfig::new(spec, 0.1, 5.0, 32, 1.0);
        let mut it = Integrator::new(&cfg).unwrap();
        let dt = it.stable_dt(&s);
        let (next, taken) = it.step(&s, dt).unwrap();
        assert!(taken > 0.0);
        assert_eq!(next.u[0], 0.0);
        assert_eq!(next.r[0], s.r[0]);
        assert!(((next.eulerian_mass() - s.mass()) / s.mass()).abs() < 1e-13);
    }
}
