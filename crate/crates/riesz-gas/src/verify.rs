//! The invariant suite behind the `verify` subcommand.
//!
//! Each check returns a [`CheckOutcome`] with the measured quantities; nothing
//! time-dependent is recorded, so the outcome depends only on the seed.

use crate::error::Result;
use crate::functionals::{
    b_constant, composition_integral, critical_alpha_band, critical_mass, entropy_bounds_check,
    hls_constant, hls_witness, riesz_composition_constant, SharpConstant,
};
use crate::grid::{RadialField, RadialGrid};
use crate::nsr_solver::{
    boundary_beta, build_initial_data, diagnostics, vanishing_viscosity_sweep, FluidState,
    ForcePath, Integrator, SolverConfig,
};
use crate::radial_kernel::{
    kernel_k, kernel_omega, omega_bound_shape, phi_kernel, potential_derivative, surface_area,
    PotentialSpec,
};
use crate::regime::{validate_regime, EnergyCase};
use crate::stability_experiments::{
    perturb, relative_energy_defect, stability_run, Perturbation, PerturbationMode,
};
use crate::steady_states::{
    euler_lagrange_residual, gradient_flow_oracle, relative_l1, solve_minimizer,
    GradientFlowOptions, SteadyState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Result of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    /// Short identifier.
    pub name: String,
    /// True when every tolerance is met.
    pub passed: bool,
    /// Measured quantities, sorted by key.
    pub metrics: BTreeMap<String, f64>,
    /// Human readable summary.
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            passed: true,
            metrics: BTreeMap::new(),
            detail: String::new(),
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    /// Records `value` and fails the check unless `ok`.
    fn require(&mut self, key: &str, value: f64, ok: bool) {
        self.metric(key, value);
        if !ok {
            self.passed = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail
                .push_str(&format!("{key} = {value:e} out of tolerance"));
        }
    }

    fn from_error(name: &str, e: crate::Error) -> Self {
        Self {
            name: name.into(),
            passed: false,
            metrics: BTreeMap::new(),
            detail: e.to_string(),
        }
    }

    fn finish(mut self, summary: &str) -> Self {
        if self.passed {
            self.detail = summary.into();
        }
        self
    }
}

fn guarded(name: &str, f: impl FnOnce(&mut CheckOutcome) -> Result<String>) -> CheckOutcome {
    let mut out = CheckOutcome::new(name);
    match f(&mut out) {
        Ok(summary) => out.finish(&summary),
        Err(e) => CheckOutcome::from_error(name, e),
    }
}

fn spec(n: usize, alpha: f64, kappa: f64, gamma: f64) -> Result<PotentialSpec> {
    PotentialSpec::new(n, alpha, kappa, gamma)
}

/// Coulomb force on a 64-point grid against the mass enclosed by each radius.
pub fn coulomb_identity() -> CheckOutcome {
    guarded("coulomb_identity", |out| {
        let s = spec(3, 1.0, 1.0, 2.0)?;
        let grid = RadialGrid::uniform(1e-6, 3.0, 64)?;
        let rho = RadialField::from_fn(&grid, |r| (-r * r).exp() * (1.0 + 0.5 * r))?;
        let force = potential_derivative(&s, &rho)?;
        let nodes = grid.nodes();
        let v = rho.values();
        let w = surface_area(3)?;
        let mut enclosed = 0.0;
        let mut worst: f64 = 0.0;
        for i in 1..nodes.len() {
            let (a, b) = (nodes[i - 1], nodes[i]);
            let slope = (v[i] - v[i - 1]) / (b - a);
            let c0 = v[i - 1] - slope * a;
            enclosed += c0 * (b.powi(3) - a.powi(3)) / 3.0 + slope * (b.powi(4) - a.powi(4)) / 4.0;
            let exact = w * enclosed / (b * b);
            worst = worst.max((force.values()[i] - exact).abs() / exact.abs());
        }
        out.require("max_relative_error", worst, worst < 1e-8);
        Ok(format!(
            "n = 3, alpha = 1, 64 nodes: max relative error {worst:.3e}"
        ))
    })
}

/// Symmetry of `K` and finite fitted constants for the force-kernel bound shapes.
pub fn kernel_symmetry_and_bounds() -> CheckOutcome {
    guarded("kernel_symmetry_and_bounds", |out| {
        let lattice: Vec<f64> = (0..20).map(|k| 0.1 + 0.1 * k as f64).collect();
        let mut worst_sym: f64 = 0.0;
        let mut summary = Vec::new();
        for n in [2usize, 3] {
            let nf = n as f64;
            for alpha in [0.5, nf - 2.0, nf - 1.5 - 1e-3] {
                let s = spec(n, alpha, 1.0, 2.0)?;
                let singular = alpha >= nf - 2.0;
                let mut constant: f64 = 0.0;
                for &r in &lattice {
                    for &eta in &lattice {
                        if singular && r == eta {
                            continue;
                        }
                        let (a, b) = (kernel_k(&s, r, eta)?, kernel_k(&s, eta, r)?);
                        worst_sym = worst_sym.max((a - b).abs() / a.abs().max(b.abs()).max(1e-300));
                        let omega = kernel_omega(&s, r, eta)?;
                        constant = constant.max(omega.abs() / omega_bound_shape(&s, r, eta));
                    }
                }
                out.require(
                    &format!("bound_constant_n{n}_alpha{alpha:.3}"),
                    constant,
                    constant.is_finite(),
                );
                summary.push(format!("C(n={n}, alpha={alpha:.3}) = {constant:.3e}"));
            }
        }
        out.require("max_symmetry_defect", worst_sym, worst_sym < 1e-9);
        Ok(format!(
            "20x20 lattice: symmetry defect {worst_sym:.2e}; {}",
            summary.join(", ")
        ))
    })
}

/// `Φ_α + 1/α → log|x|` at `α = 10⁻⁴`.
pub fn logarithmic_limit() -> CheckOutcome {
    guarded("logarithmic_limit", |out| {
        let s = spec(3, 1e-4, 1.0, 2.0)?;
        let mut worst: f64 = 0.0;
        for x in [0.5f64, 1.0, 2.0] {
            worst = worst.max((phi_kernel(&s, x)? + 1.0 / s.alpha - x.ln()).abs());
        }
        out.require("max_abs_error", worst, worst < 1e-3);
        Ok(format!("alpha = 1e-4: max deviation {worst:.3e}"))
    })
}

/// Three-dimensional composition `|·|^{−2} ∗ |·|^{−2} = π³/|x|`.
pub fn riesz_composition() -> CheckOutcome {
    guarded("riesz_composition", |out| {
        let kappa = riesz_composition_constant(3, 1.0, 1.0)?;
        let const_err = (kappa - PI.powi(3)).abs() / PI.powi(3);
        out.require("constant_relative_error", const_err, const_err < 1e-12);
        let mut worst: f64 = 0.0;
        for radius in [0.5, 1.0, 2.0] {
            let (num, exact) = composition_integral(3, 1.0, 1.0, radius)?;
            worst = worst.max((num - exact).abs() / exact);
        }
        out.require("max_relative_error", worst, worst < 1e-4);
        Ok(format!(
            "kappa = pi^3 to {const_err:.1e}; quadrature within {worst:.2e}"
        ))
    })
}

/// Random radial density: a sum of one to three Gaussian shells.
fn random_density(rng: &mut ChaCha8Rng, grid: &RadialGrid) -> Result<RadialField> {
    let k = rng.gen_range(1..=3);
    let shells: Vec<(f64, f64, f64)> = (0..k)
        .map(|_| {
            (
                rng.gen_range(0.1..2.0),
                rng.gen_range(0.0..2.0),
                rng.gen_range(0.25..1.0),
            )
        })
        .collect();
    RadialField::from_fn(grid, |r| {
        shells
            .iter()
            .map(|&(c, mu, sd)| c * (-((r - mu) / sd).powi(2)).exp())
            .sum()
    })
}

/// Hardy-Littlewood-Sobolev inequality for 20 seeded random densities.
pub fn hls_suite(seed: u64) -> CheckOutcome {
    guarded("hls_suite", |out| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = RadialGrid::uniform(1e-6, 6.0, 101)?;
        let cases: Vec<(usize, f64, RadialField)> = (0..20)
            .map(|_| {
                let n = rng.gen_range(2..=4usize);
                let alpha = rng.gen_range(0.25..(n as f64 - 1.05));
                random_density(&mut rng, &grid).map(|f| (n, alpha, f))
            })
            .collect::<Result<_>>()?;
        let witnesses = cases
            .par_iter()
            .map(|(n, a, f)| hls_witness(*n, *a, f))
            .collect::<Result<Vec<_>>>()?;
        let violations = witnesses.iter().filter(|w| !w.holds).count();
        let max_ratio = witnesses.iter().map(|w| w.ratio).fold(0.0, f64::max);
        out.metric("max_ratio", max_ratio);
        out.require("violations", violations as f64, violations == 0);
        Ok(format!(
            "20 densities, largest lhs/rhs {max_ratio:.4}, 0 violations"
        ))
    })
}

/// Exponent band endpoints and the `n = 3, α = 1, γ = 4/3` critical-mass chain.
pub fn critical_mass_arithmetic() -> CheckOutcome {
    guarded("critical_mass_arithmetic", |out| {
        let band20 = critical_alpha_band(20)?;
        out.require(
            "band_20_exact",
            if band20 == Some((4.0, 5.0)) { 1.0 } else { 0.0 },
            band20 == Some((4.0, 5.0)),
        );
        let band19 = critical_alpha_band(19)?;
        out.require(
            "band_19_empty",
            if band19.is_none() { 1.0 } else { 0.0 },
            band19.is_none(),
        );
        // Γ(1) = 1, Γ(3/2) = √π/2, Γ(5/2) = 3√π/4, Γ(3) = 2.
        let c_oracle = 4.0 / 3.0 * (4.0 / PI.sqrt()).powf(2.0 / 3.0);
        let c = hls_constant(3, 1.0)?;
        let gamma_ = 4.0 / 3.0;
        let exponent = 1.0 / (3.0 * (gamma_ - 1.0));
        let b = b_constant(3, gamma_, 1.0, c)?;
        let report = critical_mass(3, gamma_, 1.0, None, SharpConstant::HlsSurrogate)?;
        let errs = [
            ("hls_constant_error", (c - c_oracle).abs() / c_oracle),
            ("exponent_error", (exponent - 1.0).abs()),
            ("b_error", (b - 8.0 * c_oracle).abs() / (8.0 * c_oracle)),
            (
                "mc_error",
                (report.mc - (8.0 * c_oracle).powf(-1.5)).abs() / (8.0 * c_oracle).powf(-1.5),
            ),
        ];
        for (k, e) in errs {
            out.require(k, e, e < 1e-10);
        }
        out.metric("mc", report.mc);
        Ok(format!(
            "band(20) = (4, 5), band(19) = none, B = 8C, M_c = {:.6e}",
            report.mc
        ))
    })
}

/// Smooth compactly supported test density `A(1 − r²)_+` with `A = 5`.
fn cap_density(grid: &RadialGrid) -> Result<RadialField> {
    RadialField::from_fn(grid, |r| 5.0 * (1.0 - r * r).max(0.0))
}

fn lagrangian_case(
    s: &PotentialSpec,
    cells: usize,
    epsilon: f64,
    path: ForcePath,
) -> Result<(SolverConfig, FluidState)> {
    let grid = RadialGrid::uniform(1e-6, 1.0, 201)?;
    let rho0 = cap_density(&grid)?;
    let mut cfg = SolverConfig::new(*s, epsilon, 3.0, cells, 0.2);
    cfg.force_path = path;
    cfg.output_every = 1;
    let init = build_initial_data(s, &rho0, &RadialField::zeros(&grid), epsilon, 3.0, cells)?;
    Ok((cfg, init))
}

/// Mass drift over 10⁴ steps, energy monotonicity and agreement of the two Coulomb force paths.
pub fn solver_conservation() -> CheckOutcome {
    guarded("solver_conservation", |out| {
        let attractive = spec(3, 1.0, 1.0, 2.0)?;
        let (cfg, init) = lagrangian_case(&attractive, 256, 0.05, ForcePath::CoulombLocal)?;
        let mut integ = Integrator::new(&cfg)?;
        let mut state = init.clone();
        let m0 = init.mass();
        let mut drift: f64 = 0.0;
        for _ in 0..10_000 {
            let dt = integ.stable_dt(&state);
            state = integ.step(&state, dt)?.0;
            drift = drift.max((state.eulerian_mass() - m0).abs() / m0);
        }
        out.require("mass_drift", drift, drift < 1e-10);

        for (label, kappa) in [("attractive", 1.0), ("repulsive", -1.0)] {
            let s = attractive.with_kappa(kappa);
            let (cfg, init) = lagrangian_case(&s, 256, 0.05, ForcePath::CoulombLocal)?;
            let traj = crate::nsr_solver::run(&cfg, &init)?;
            let energies: Vec<f64> = traj.rows.iter().map(|r| r.energy.total).collect();
            let scale = energies.iter().map(|e| e.abs()).fold(0.0, f64::max);
            let worst = energies
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::NEG_INFINITY, f64::max);
            out.require(
                &format!("max_energy_increase_{label}"),
                worst / scale,
                worst <= 1e-12 * scale,
            );
        }

        let (cfg_k, init_k) = lagrangian_case(&attractive, 256, 0.05, ForcePath::Kernel)?;
        let cfg_l = SolverConfig {
            force_path: ForcePath::CoulombLocal,
            ..cfg_k
        };
        let (a, b) = rayon::join(
            || crate::nsr_solver::run(&cfg_k, &init_k),
            || crate::nsr_solver::run(&cfg_l, &init_k),
        );
        let (a, b) = (a?, b?);
        let mut worst: f64 = 0.0;
        for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
            for (ra, rb) in sa.r.iter().zip(&sb.r) {
                worst = worst.max((ra - rb).abs() / ra);
            }
            for (ua, ub) in sa.u.iter().zip(&sb.u) {
                worst = worst.max((ua - ub).abs() / (1.0 + ua.abs()));
            }
        }
        out.require(
            "dual_path_difference",
            worst,
            worst < 1e-10 && a.snapshots.len() == b.snapshots.len(),
        );
        out.metric("dual_path_steps", a.steps as f64);
        Ok(format!("drift {drift:.2e} over 1e4 steps; energy non-increasing for kappa = +-1; force paths agree to {worst:.2e}"))
    })
}

/// Mass, boundary density and outer stress of the approximating initial data.
pub fn initial_data_contract() -> CheckOutcome {
    guarded("initial_data_contract", |out| {
        let s = spec(3, 1.0, 1.0, 2.0)?;
        let (cfg, init) = lagrangian_case(&s, 256, 0.05, ForcePath::CoulombLocal)?;
        let grid = RadialGrid::uniform(1e-6, 1.0, 201)?;
        let target = cap_density(&grid)?.space_integral(3);
        let mass_err = (init.mass() - target).abs() / target;
        out.require("mass_error", mass_err, mass_err < 1e-12);
        let beta = boundary_beta(&s);
        let expected = cfg.b.powf(-(3.0 - beta));
        let edge = *init.rho.last().expect("cells");
        let edge_err = (edge - expected).abs() / expected;
        out.require("boundary_density_error", edge_err, edge_err < 1e-10);
        let stress = diagnostics(&s, cfg.epsilon, &init).boundary_pressure.abs();
        out.require("outer_stress", stress, stress < 1e-8);
        Ok(format!(
            "mass error {mass_err:.1e}, rho(b) error {edge_err:.1e}, outer stress {stress:.1e}"
        ))
    })
}

/// Lane-Emden radius, Euler-Lagrange residual, oracle agreement and negative free energy.
pub fn steady_state_oracle() -> CheckOutcome {
    guarded("steady_state_oracle", |out| {
        let s = spec(3, 1.0, 1.0, 2.0)?;
        let grid = RadialGrid::uniform(1e-6, 0.6, 301)?;
        let radius = PI.sqrt() / 4.0;
        let results = [0.5, 1.0, 2.0]
            .par_iter()
            .map(|&m| -> Result<(f64, SteadyState, SteadyState)> {
                let fp = solve_minimizer(&s, m, &grid, 1e-10)?;
                let gf = gradient_flow_oracle(&s, m, &grid, &GradientFlowOptions::default())?;
                Ok((m, fp, gf))
            })
            .collect::<Result<Vec<_>>>()?;
        for (m, fp, gf) in &results {
            let dr = (fp.support_radius - radius).abs();
            out.require(&format!("radius_error_m{m}"), dr, dr < 1e-3);
            let (on, _) = euler_lagrange_residual(&s, fp)?;
            out.require(&format!("el_residual_m{m}"), on, on < 1e-6);
            let l1 = relative_l1(3, &fp.profile, &gf.profile)?;
            out.require(&format!("oracle_l1_m{m}"), l1, l1 < 1e-4);
            out.require(
                &format!("free_energy_m{m}"),
                fp.free_energy,
                fp.free_energy < 0.0,
            );
        }
        Ok(format!(
            "support radius sqrt(pi)/4 for M in {{0.5, 1, 2}}; oracle L1 <= {:.1e}",
            results
                .iter()
                .map(|(_, a, b)| relative_l1(3, &a.profile, &b.profile).unwrap_or(f64::NAN))
                .fold(0.0, f64::max)
        ))
    })
}

/// Cells of the Lagrangian grid in the stability bookkeeping runs.
pub const STABILITY_CELLS: usize = 64;
/// Amplitude of the recorded perturbed runs.
pub const STABILITY_AMPLITUDE: f64 = 1e-2;
/// Boundedness ratios `max/initial` of the stability functional recorded on the first build
/// for bump, squeeze and velocity perturbations of amplitude [`STABILITY_AMPLITUDE`].
pub const STABILITY_BASELINES: [(PerturbationMode, f64); 3] = [
    (PerturbationMode::Bump, 1.0),
    (PerturbationMode::Squeeze, 1.0),
    (PerturbationMode::Velocity, 2.3259863675965033),
];
/// Relative tolerance of the regression comparison against [`STABILITY_BASELINES`].
pub const BASELINE_TOL: f64 = 1e-6;

/// Steady state and solver settings of the stability bookkeeping runs.
pub fn stability_setup() -> Result<(PotentialSpec, SteadyState, SolverConfig)> {
    let s = spec(3, 1.0, 1.0, 2.0)?;
    let grid = RadialGrid::uniform(1e-6, 0.7, 141)?;
    let steady = solve_minimizer(&s, 1.0, &grid, 1e-12)?;
    let mut solver = SolverConfig::new(
        s,
        crate::stability_experiments::DEFAULT_EPSILON,
        2.0,
        STABILITY_CELLS,
        1.0,
    );
    solver.output_every = 20;
    Ok((s, steady, solver))
}

/// Relative-energy identity, cross-term bound, zero-perturbation noise and baseline ratios.
pub fn stability_bookkeeping() -> CheckOutcome {
    guarded("stability_bookkeeping", |out| {
        let (s, steady, solver) = stability_setup()?;
        let modes = [
            PerturbationMode::Bump,
            PerturbationMode::Squeeze,
            PerturbationMode::Velocity,
        ];
        let mut worst_identity: f64 = 0.0;
        for mode in modes {
            for a in [1e-3, 1e-2, 1e-1] {
                let (rho0, m0) = perturb(3, &steady.profile, mode, a)?;
                worst_identity =
                    worst_identity.max(relative_energy_defect(&s, &steady, &rho0, &m0)?);
            }
        }
        out.require("identity_defect", worst_identity, worst_identity < 1e-8);

        let mut runs: Vec<Perturbation> = vec![Perturbation {
            mode: PerturbationMode::Bump,
            amplitude: 0.0,
        }];
        runs.extend(modes.iter().map(|&mode| Perturbation {
            mode,
            amplitude: STABILITY_AMPLITUDE,
        }));
        let reports = runs
            .par_iter()
            .map(|&p| stability_run(&s, &steady, p, &solver))
            .collect::<Result<Vec<_>>>()?;
        let violations: usize = reports.iter().map(|r| r.cross_term_violations).sum();
        out.require("cross_term_violations", violations as f64, violations == 0);
        out.metric(
            "max_cross_term_ratio",
            reports
                .iter()
                .map(|r| r.cross_term_ratio)
                .fold(0.0, f64::max),
        );
        let zero = &reports[0];
        out.metric("projection_floor", zero.projection_floor);
        out.require(
            "zero_run_max_over_floor",
            zero.max_value / zero.projection_floor,
            zero.max_value < 10.0 * zero.projection_floor,
        );
        for (report, (mode, baseline)) in reports[1..].iter().zip(STABILITY_BASELINES) {
            let key = format!("ratio_{mode:?}").to_lowercase();
            let dev = (report.ratio - baseline).abs() / baseline;
            out.require(&key, report.ratio, dev <= BASELINE_TOL);
            if let Some(msg) = &report.aborted {
                out.passed = false;
                out.detail = format!("{mode:?} run aborted: {msg}");
            }
        }
        Ok(format!(
            "identity defect {worst_identity:.1e}; no cross-term violations; zero run within {:.2}x floor; ratios match baselines",
            zero.max_value / zero.projection_floor
        ))
    })
}

/// Windowed L¹ distances of neighbouring viscosities decrease along the sweep at every positive time.
pub fn viscosity_sweep() -> CheckOutcome {
    guarded("viscosity_sweep", |out| {
        let s = spec(3, 1.0, 1.0, 2.0)?;
        let grid = RadialGrid::uniform(1e-6, 2.0, 201)?;
        let rho0 = RadialField::from_fn(&grid, |r| 2.0 * (-r * r).exp())?;
        let mut cfg = SolverConfig::new(s, 0.1, 3.0, 256, 0.2);
        cfg.force_path = ForcePath::CoulombLocal;
        let report = vanishing_viscosity_sweep(
            &cfg,
            &rho0,
            &RadialField::zeros(&grid),
            &[1e-1, 3e-2, 1e-2],
            &[0.1, 0.2],
        )?;
        let mut ok = true;
        for (j, t) in report.times.iter().enumerate() {
            let d: Vec<f64> = report.pairs.iter().map(|p| p.l1[j]).collect();
            for (k, v) in d.iter().enumerate() {
                out.metric(&format!("l1_t{t}_pair{k}"), *v);
            }
            ok &= d.windows(2).all(|w| w[1] < w[0]);
        }
        out.require("decreasing", if ok { 1.0 } else { 0.0 }, ok);
        let last: Vec<String> = report
            .pairs
            .iter()
            .map(|p| format!("{:.3e}", p.l1.last().copied().unwrap_or(f64::NAN)))
            .collect();
        Ok(format!(
            "L1 on r <= {} at t = 0.2: {}",
            report.window,
            last.join(" > ")
        ))
    })
}

/// One constant bounds the entropy pair on a lattice for several adiabatic exponents.
pub fn entropy_bounds() -> CheckOutcome {
    guarded("entropy_bounds", |out| {
        let rhos: Vec<f64> = (0..12).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect();
        let us: Vec<f64> = (-6..=6).map(|k| 0.75 * k as f64).collect();
        for gamma in [1.4, 2.0, 3.0] {
            let rep = entropy_bounds_check(&rhos, &us, gamma)?;
            out.require(&format!("constant_gamma{gamma}"), rep.constant, rep.passed);
        }
        Ok("finite constants and positive flux for gamma in {1.4, 2, 3}".into())
    })
}

/// The regime table classifies the reference configurations.
pub fn regime_table() -> CheckOutcome {
    guarded("regime_table", |out| {
        let clean = validate_regime(&spec(3, 1.0, 1.0, 2.0)?, Some(1.0), None);
        let ok1 = clean.energy_case == Some(EnergyCase::Supercritical)
            && clean.bd_improved
            && clean.stability
            && clean.is_clean();
        out.require("supercritical_case", if ok1 { 1.0 } else { 0.0 }, ok1);
        let sub = validate_regime(&spec(3, 1.0, 1.0, 1.25)?, Some(1e-9), Some(1.0));
        let ok2 = sub.energy_case == Some(EnergyCase::Subcritical) && sub.critical_mass.is_some();
        out.require("subcritical_case", if ok2 { 1.0 } else { 0.0 }, ok2);
        let edge = validate_regime(&spec(3, 1.999, 1.0, 2.0)?, None, None);
        out.require(
            "edge_warning",
            edge.warnings.len() as f64,
            !edge.warnings.is_empty(),
        );
        Ok("reference configurations classified".into())
    })
}

/// Every check, in order, for a given seed.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    let checks: Vec<Box<dyn Fn() -> CheckOutcome + Send + Sync>> = vec![
        Box::new(coulomb_identity),
        Box::new(kernel_symmetry_and_bounds),
        Box::new(logarithmic_limit),
        Box::new(riesz_composition),
        Box::new(move || hls_suite(seed)),
        Box::new(critical_mass_arithmetic),
        Box::new(solver_conservation),
        Box::new(initial_data_contract),
        Box::new(steady_state_oracle),
        Box::new(stability_bookkeeping),
        Box::new(viscosity_sweep),
        Box::new(entropy_bounds),
        Box::new(regime_table),
    ];
    checks.par_iter().map(|c| c()).collect()
}
