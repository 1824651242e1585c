//! Free-boundary Navier-Stokes-Riesz solver in Lagrangian mass coordinates.
//!
//! Velocities live at the particle paths bounding the mass cells and densities
//! at the cells. The inner edge `r = 1/b` is a fixed wall and the outer edge is a
//! free boundary with zero normal stress. Pressure and the nonlocal force are
//! explicit, the viscous operator is implicit, and the two stages are averaged
//! (Heun), so the time step is limited only by the acoustic and force scales.

mod diagnostics;
mod initial_data;
mod run;
mod scheme;
mod state;
pub(crate) use scheme::thomas;

pub use diagnostics::{diagnostics, DiagnosticsRow, DIAGNOSTICS_HEADER};
pub use initial_data::{boundary_beta, build_initial_data, cutoff, mollify};
pub use run::{
    lq_distance, lq_distance_within, run, run_partial, vanishing_viscosity_sweep, SweepPair,
    SweepReport, Trajectory,
};
pub use scheme::{step, Integrator, DENSITY_FLOOR};
pub use state::FluidState;

use crate::error::{domain, Result};
use crate::radial_kernel::PotentialSpec;
use serde::{Deserialize, Serialize};

/// How the nonlocal force `(Φ_α ∗ ρ)_r` is evaluated at the edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForcePath {
    /// Product-integration matrix of the kernel `ω(r, η)`, closed form when `α = n − 2`.
    Kernel,
    /// Product-integration matrix with `ω` computed by angular quadrature for every `α`.
    Quadrature,
    /// Newton's shell theorem `ω_n x / r^{n−1}`; only valid when `α = n − 2`.
    CoulombLocal,
}

impl std::str::FromStr for ForcePath {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kernel" => Ok(Self::Kernel),
            "quadrature" => Ok(Self::Quadrature),
            "coulomb-local" => Ok(Self::CoulombLocal),
            other => domain(format!(
                "unknown force path '{other}' (kernel, quadrature, coulomb-local)"
            )),
        }
    }
}

/// Parameters of a solver run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Interaction and pressure law.
    pub spec: PotentialSpec,
    /// Viscosity `ε`.
    pub epsilon: f64,
    /// Initial outer radius; the inner wall sits at `1/b`.
    pub b: f64,
    /// Number of mass cells.
    pub cells: usize,
    /// Final time.
    pub t_final: f64,
    /// Courant factor.
    pub cfl: f64,
    /// Largest admissible time step.
    pub dt_max: f64,
    /// Steps between kernel-matrix rebuilds; `1` rebuilds at every stage.
    pub force_refresh_every: usize,
    /// Steps between diagnostic samples.
    pub output_every: usize,
    /// Force evaluation.
    pub force_path: ForcePath,
    /// Upper bound on the number of steps of one run.
    pub max_steps: usize,
}

impl SolverConfig {
    /// Configuration with default numerical parameters.
    pub fn new(spec: PotentialSpec, epsilon: f64, b: f64, cells: usize, t_final: f64) -> Self {
        Self {
            spec,
            epsilon,
            b,
            cells,
            t_final,
            cfl: 0.4,
            dt_max: 1e-2,
            force_refresh_every: 1,
            output_every: 10,
            force_path: ForcePath::Kernel,
            max_steps: 10_000_000,
        }
    }

    /// Checks the invariants of the configuration.
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return domain(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.b > 1.0) {
            return domain(format!("b must exceed 1, got {}", self.b));
        }
        if self.cells < 16 {
            return domain(format!(
                "at least 16 cells are required, got {}",
                self.cells
            ));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return domain(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.t_final >= 0.0) || !(self.dt_max > 0.0) {
            return domain("t_final must be nonnegative and dt_max positive");
        }
        if self.force_refresh_every == 0 || self.output_every == 0 {
            return domain("force_refresh_every and output_every must be positive");
        }
        if self.force_path == ForcePath::CoulombLocal && !self.spec.is_coulomb() {
            return domain("the local force path requires alpha = n - 2");
        }
        Ok(())
    }
}
