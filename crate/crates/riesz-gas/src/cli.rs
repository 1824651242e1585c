//! Command line front end: configuration ingestion, orchestration and output.
//!
//! Exit codes: `0` success, `1` a `verify` check failed, `2` invalid arguments,
//! configuration or parameters, `3` numerical blow-up, `4` non-convergence.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::functionals::{c_gamma, critical_alpha_band, critical_mass, SharpConstant};
use crate::grid::{RadialField, RadialGrid};
use crate::io::{csv_string, csv_text, fmt_f64, json_string, RunManifest};
use crate::nsr_solver::{
    build_initial_data, diagnostics, run_partial, vanishing_viscosity_sweep, FluidState,
    DIAGNOSTICS_HEADER,
};
use crate::radial_kernel::{
    kernel_k, kernel_omega, omega_bound_shape, surface_area, PotentialSpec,
};
use crate::regime::{validate_regime, RegimeReport};
use crate::stability_experiments::{stability_scan, PerturbationMode, StabilityReport};
use crate::steady_states::{
    euler_lagrange_residual, gradient_flow_oracle, relative_l1, solve_minimizer,
    solve_sub_critical, GradientFlowOptions, SteadyState, SteadyStateRecord,
};
use crate::verify::{self, CheckOutcome, STABILITY_AMPLITUDE, STABILITY_BASELINES};
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

/// Environment variable overriding `--threads`.
pub const THREADS_ENV: &str = "RIESZ_GAS_THREADS";

/// Exit code of a failed `verify` check.
pub const EXIT_CHECK_FAILED: i32 = 1;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(
    name = "riesz-gas",
    version,
    about = "Radial Euler-Riesz and Navier-Stokes-Riesz experiments"
)]
pub struct Cli {
    /// What to run.
    #[command(subcommand)]
    pub command: Command,
    /// Configuration file (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed of the randomised suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; `RIESZ_GAS_THREADS` takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

/// Subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evolve approximating initial data with the Lagrangian solver.
    Simulate,
    /// Compute a steady state of the free energy.
    Steady,
    /// Perturb a steady state and track the stability functional.
    Stability,
    /// Critical mass of the subcritical exponent band.
    CriticalMass,
    /// Tabulate the exponent band over dimensions 2 to `n_max`.
    PhaseDiagram,
    /// Tabulate the radial kernels on a lattice.
    KernelTable,
    /// Compare runs along a sequence of decreasing viscosities.
    SweepEpsilon,
    /// Run the invariant suite.
    Verify,
}

impl Command {
    /// Name used on the command line and in manifests.
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Steady => "steady",
            Command::Stability => "stability",
            Command::CriticalMass => "critical-mass",
            Command::PhaseDiagram => "phase-diagram",
            Command::KernelTable => "kernel-table",
            Command::SweepEpsilon => "sweep-epsilon",
            Command::Verify => "verify",
        }
    }

    fn needs_config(self) -> bool {
        matches!(
            self,
            Command::Simulate | Command::Steady | Command::Stability | Command::SweepEpsilon
        )
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BlowUp { .. } => 3,
        Error::NonConvergence { .. } => 4,
        Error::Domain(_)
        | Error::Singular(_)
        | Error::Vacuum(_)
        | Error::Config(_)
        | Error::Io(_) => 2,
    }
}

/// Thread count from `RIESZ_GAS_THREADS`, falling back to the flag.
pub fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&k| k > 0)
            .map(Some)
            .ok_or_else(|| {
                Error::Config(format!(
                    "{THREADS_ENV} must be a positive integer, got '{v}'"
                ))
            }),
        Err(_) => match flag {
            Some(0) => Err(Error::Config("--threads must be positive".into())),
            other => Ok(other),
        },
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("riesz-gas {}: {e}", cli.command.name());
            exit_code(&e)
        }
    }
}

/// Runs a parsed command line inside a pool of the requested size.
pub fn execute(cli: &Cli) -> Result<i32> {
    let threads = resolve_threads(cli.threads)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn load_config(cli: &Cli) -> Result<Config> {
    match &cli.config {
        Some(path) => Config::load(path),
        None if cli.command.needs_config() => Err(Error::Config(format!(
            "{} needs --config PATH",
            cli.command.name()
        ))),
        None => Ok(Config::default()),
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let config = load_config(cli)?;
    let manifest = RunManifest {
        config_path: cli.config.clone(),
        out_dir: cli.out.clone(),
        ..RunManifest::new(cli.command.name(), &config.canonical(), cli.seed)
    };
    manifest.prepare_output()?;
    match cli.command {
        Command::Simulate => simulate(&config, &manifest),
        Command::Steady => steady(&config, &manifest),
        Command::Stability => stability(&config, &manifest),
        Command::CriticalMass => critical_mass_cmd(&config, &manifest),
        Command::PhaseDiagram => phase_diagram(&config, &manifest),
        Command::KernelTable => kernel_table(&config, &manifest),
        Command::SweepEpsilon => sweep_epsilon(&config, &manifest),
        Command::Verify => verify_cmd(&manifest),
    }
}

fn report_regime(regime: &RegimeReport) {
    for w in &regime.warnings {
        eprintln!("warning: {w}");
    }
}

/// Initial density and momentum described by `profile`, `mass`, `width` and `velocity`.
///
/// `profile = gaussian` gives `exp(−(r/width)²)` on `r ≤ min(4 width, b − 1)`,
/// `profile = cap` gives `(1 − (r/width)²)_+`; both are scaled to `mass`. The
/// momentum is `velocity · r · ρ₀`.
pub fn initial_profile(config: &Config, n: usize, b: f64) -> Result<(RadialField, RadialField)> {
    let mass: f64 = config.require("mass")?;
    let width: f64 = config.get_or("width", 1.0)?;
    let velocity: f64 = config.get_or("velocity", 0.0)?;
    let points: usize = config.get_or("profile_points", 401)?;
    let kind: String = config.get_or("profile", "gaussian".to_string())?;
    if !(mass > 0.0 && width > 0.0) || points < 8 {
        return Err(Error::Config(
            "profile needs mass > 0, width > 0 and profile_points >= 8".into(),
        ));
    }
    let (extent, shape): (f64, Box<dyn Fn(f64) -> f64>) = match kind.as_str() {
        "gaussian" => (
            (4.0 * width).min(b - 1.0),
            Box::new(move |r: f64| (-(r / width).powi(2)).exp()),
        ),
        "cap" => (
            width,
            Box::new(move |r: f64| (1.0 - (r / width).powi(2)).max(0.0)),
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown profile '{other}' (gaussian, cap)"
            )))
        }
    };
    if !(extent > 1e-3 && extent <= b - 1.0) {
        return Err(Error::Config(format!(
            "profile extent {extent} must lie in (0, b - 1]"
        )));
    }
    let grid = RadialGrid::uniform(1e-6, extent, points)?;
    let raw = RadialField::from_fn(&grid, &shape)?;
    let scale = mass / raw.space_integral(n);
    let rho0 = raw.map(|v| v * scale);
    let m0 = RadialField::from_fn(&grid, |r| velocity * r * scale * shape(r))?;
    Ok((rho0, m0))
}

/// Radial energy per unit solid angle of a Lagrangian state.
fn radial_energy(spec: &PotentialSpec, epsilon: f64, state: &FluidState) -> Result<f64> {
    Ok(diagnostics(spec, epsilon, state).energy.total / surface_area(spec.n)?)
}

#[derive(Serialize)]
struct SimulationOutput<'a> {
    config: &'a crate::nsr_solver::SolverConfig,
    regime: &'a RegimeReport,
    steps: usize,
    aborted: Option<String>,
    snapshots: &'a [FluidState],
}

fn simulate(config: &Config, manifest: &RunManifest) -> Result<i32> {
    let cfg = config.solver_config(0.05)?;
    let (rho0, m0) = initial_profile(config, cfg.spec.n, cfg.b)?;
    let init = build_initial_data(&cfg.spec, &rho0, &m0, cfg.epsilon, cfg.b, cfg.cells)?;
    let e0 = radial_energy(&cfg.spec, cfg.epsilon, &init)?;
    let regime = validate_regime(&cfg.spec, Some(init.mass()), Some(e0));
    report_regime(&regime);
    let (traj, err) = run_partial(&cfg, &init, &[])?;
    let rows: Vec<Vec<f64>> = traj.rows.iter().map(|r| r.columns().to_vec()).collect();
    manifest.write(
        "diagnostics.csv",
        &csv_string(manifest, DIAGNOSTICS_HEADER, &rows),
    )?;
    let out = SimulationOutput {
        config: &cfg,
        regime: &regime,
        steps: traj.steps,
        aborted: err.as_ref().map(|e| e.to_string()),
        snapshots: &traj.snapshots,
    };
    manifest.write("snapshots.json", &json_string(manifest, &out)?)?;
    println!(
        "simulate: {} steps to t = {}, {} snapshots",
        traj.steps,
        traj.final_state.t,
        traj.snapshots.len()
    );
    match err {
        Some(e) => Err(e),
        None => Ok(0),
    }
}

fn steady_grid(config: &Config) -> Result<RadialGrid> {
    RadialGrid::uniform(
        config.get_or("r_min", 1e-6)?,
        config.get_or("r_max", 1.0)?,
        config.get_or("grid_points", 301)?,
    )
}

fn solve_steady(
    spec: &PotentialSpec,
    mass: f64,
    grid: &RadialGrid,
    tol: f64,
) -> Result<SteadyState> {
    let nf = spec.n as f64;
    if spec.gamma > (nf + spec.alpha) / nf {
        solve_minimizer(spec, mass, grid, tol)
    } else {
        solve_sub_critical(spec, mass, grid, tol)
    }
}

#[derive(Serialize)]
struct SteadyOutput<'a> {
    #[serde(flatten)]
    state: SteadyStateRecord,
    regime: &'a RegimeReport,
    el_residual_support: f64,
    el_residual_outside: f64,
    oracle_l1: Option<f64>,
}

fn steady(config: &Config, manifest: &RunManifest) -> Result<i32> {
    let spec = config.potential_spec()?;
    let mass: f64 = config.require("mass")?;
    let regime = validate_regime(&spec, Some(mass), config.get("e0")?);
    report_regime(&regime);
    let grid = steady_grid(config)?;
    let tol = config.get_or("tol", 1e-10)?;
    let state = solve_steady(&spec, mass, &grid, tol)?;
    let (on, off) = euler_lagrange_residual(&spec, &state)?;
    let oracle_l1 = if config.get_or("oracle", false)? {
        let nf = spec.n as f64;
        let seeded = spec.gamma <= (nf + spec.alpha) / nf;
        let opts = GradientFlowOptions {
            initial: seeded.then(|| state.profile.clone()),
            ..Default::default()
        };
        let flow = gradient_flow_oracle(&spec, mass, state.profile.grid(), &opts)?;
        Some(relative_l1(spec.n, &flow.profile, &state.profile)?)
    } else {
        None
    };
    let out = SteadyOutput {
        state: state.record(),
        regime: &regime,
        el_residual_support: on,
        el_residual_outside: off,
        oracle_l1,
    };
    manifest.write("steady_state.json", &json_string(manifest, &out)?)?;
    println!(
        "steady: support radius {}, lambda {}, free energy {}",
        state.support_radius, state.lambda, state.free_energy
    );
    Ok(0)
}

#[derive(Serialize)]
struct StabilitySummary {
    perturbation: crate::stability_experiments::Perturbation,
    initial_value: f64,
    max_value: f64,
    ratio: f64,
    identity_defect: f64,
    cross_term_ratio: f64,
    cross_term_violations: usize,
    projection_floor: f64,
    steps: usize,
    aborted: Option<String>,
    baseline_ratio: Option<f64>,
    baseline_deviation: Option<f64>,
}

#[derive(Serialize)]
struct StabilityOutput<'a> {
    regime: &'a RegimeReport,
    steady: SteadyStateRecord,
    canonical_setup: bool,
    runs: Vec<StabilitySummary>,
}

fn stability(config: &Config, manifest: &RunManifest) -> Result<i32> {
    let spec = config.potential_spec()?;
    let mass: f64 = config.get_or("mass", 1.0)?;
    let regime = validate_regime(&spec, Some(mass), None);
    report_regime(&regime);
    let (c_spec, c_steady, c_solver) = verify::stability_setup()?;
    let grid = RadialGrid::uniform(
        config.get_or("r_min", 1e-6)?,
        config.get_or("r_max", 0.7)?,
        config.get_or("grid_points", 141)?,
    )?;
    let steady = solve_steady(&spec, mass, &grid, config.get_or("tol", 1e-12)?)?;
    let mut solver = crate::nsr_solver::SolverConfig::new(
        spec,
        config.get_or("epsilon", c_solver.epsilon)?,
        c_solver.b,
        config.get_or("cells", c_solver.cells)?,
        config.get_or("t_final", c_solver.t_final)?,
    );
    solver.output_every = config.get_or("output_every", c_solver.output_every)?;
    solver.cfl = config.get_or("cfl", solver.cfl)?;
    solver.dt_max = config.get_or("dt_max", solver.dt_max)?;
    solver.max_steps = config.get_or("max_steps", solver.max_steps)?;
    solver.validate()?;
    let canonical = spec == c_spec && steady.profile == c_steady.profile && solver == c_solver;
    let modes: Vec<PerturbationMode> = match config.get_list::<String>("modes")? {
        Some(list) => list
            .iter()
            .map(|m| PerturbationMode::from_str(m))
            .collect::<Result<_>>()?,
        None => vec![
            PerturbationMode::Bump,
            PerturbationMode::Squeeze,
            PerturbationMode::Velocity,
        ],
    };
    let amplitudes: Vec<f64> = config
        .get_list("amplitudes")?
        .unwrap_or_else(|| vec![1e-3, 1e-2, 1e-1]);
    let mut reports: Vec<StabilityReport> = Vec::new();
    for mode in modes {
        reports.extend(stability_scan(&spec, &steady, mode, &amplitudes, &solver)?);
    }
    let mut runs = Vec::new();
    let mut first_error = None;
    for (k, r) in reports.iter().enumerate() {
        let rows: Vec<Vec<f64>> = (0..r.times.len())
            .map(|j| {
                vec![
                    r.times[j],
                    r.functional[j],
                    r.d[j],
                    r.norm_sq[j],
                    r.kinetic[j],
                ]
            })
            .collect();
        let name = format!("stability_{:02}_{:?}.csv", k, r.perturbation.mode).to_lowercase();
        manifest.write(
            &name,
            &csv_string(manifest, "t,functional,d,norm_sq,kinetic", &rows),
        )?;
        let baseline_ratio = STABILITY_BASELINES
            .iter()
            .find(|(m, _)| {
                *m == r.perturbation.mode && r.perturbation.amplitude == STABILITY_AMPLITUDE
            })
            .map(|&(_, v)| v);
        let baseline_deviation = baseline_ratio
            .filter(|_| canonical)
            .map(|b| (r.ratio - b).abs() / b);
        runs.push(StabilitySummary {
            perturbation: r.perturbation,
            initial_value: r.initial_value,
            max_value: r.max_value,
            ratio: r.ratio,
            identity_defect: r.identity_defect,
            cross_term_ratio: r.cross_term_ratio,
            cross_term_violations: r.cross_term_violations,
            projection_floor: r.projection_floor,
            steps: r.steps,
            aborted: r.aborted.clone(),
            baseline_ratio,
            baseline_deviation,
        });
        if first_error.is_none() {
            first_error = r.abort_error.clone();
        }
        println!(
            "stability: {:?} a = {} ratio {}",
            r.perturbation.mode, r.perturbation.amplitude, r.ratio
        );
    }
    let out = StabilityOutput {
        regime: &regime,
        steady: steady.record(),
        canonical_setup: canonical,
        runs,
    };
    manifest.write("stability_summary.json", &json_string(manifest, &out)?)?;
    match first_error {
        Some(e) => Err(e),
        None => Ok(0),
    }
}

#[derive(Serialize)]
struct CriticalMassOutput<'a> {
    report: crate::functionals::CriticalMassReport,
    c_gamma: Option<f64>,
    regime: &'a RegimeReport,
}

fn critical_mass_cmd(config: &Config, manifest: &RunManifest) -> Result<i32> {
    let spec = PotentialSpec::new(
        config.get_or("n", 3)?,
        config.get_or("alpha", 1.0)?,
        config.get_or("kappa", 1.0)?,
        config.get_or("gamma", 4.0 / 3.0)?,
    )?;
    let mass: Option<f64> = config.get("mass")?;
    let e0: Option<f64> = config.get("e0")?;
    let report = critical_mass(
        spec.n,
        spec.gamma,
        spec.alpha,
        e0,
        SharpConstant::HlsSurrogate,
    )?;
    let cg = match mass {
        Some(m) => Some(c_gamma(spec.n, spec.gamma, spec.alpha, m, report.b)?),
        None => None,
    };
    let regime = validate_regime(&spec, mass, e0);
    report_regime(&regime);
    println!("critical-mass: B = {}, M_c = {}", report.b, report.mc);
    manifest.write(
        "critical_mass.json",
        &json_string(
            manifest,
            &CriticalMassOutput {
                report,
                c_gamma: cg,
                regime: &regime,
            },
        )?,
    )?;
    Ok(0)
}

/// Rows `n, α₋, α₊` of the exponent band for `n = 2..=n_max`; empty cells when the band is empty.
pub fn phase_rows(n_max: usize) -> Result<Vec<Vec<String>>> {
    (2..=n_max)
        .map(|n| {
            Ok(match critical_alpha_band(n)? {
                Some((lo, hi)) => vec![n.to_string(), fmt_f64(lo), fmt_f64(hi)],
                None => vec![n.to_string(), String::new(), String::new()],
            })
        })
        .collect()
}

fn phase_diagram(config: &Config, manifest: &RunManifest) -> Result<i32> {
    let n_max: usize = config.get_or("n_max", 200)?;
    if n_max < 2 {
        return Err(Error::Config("n_max must be at least 2".into()));
    }
    let rows = phase_rows(n_max)?;
    manifest.write(
        "phase_diagram.csv",
        &csv_text(manifest, "n,alpha_minus,alpha_plus", &rows),
    )?;
    println!(
        "phase-diagram: {} rows, band nonempty from n = {}",
        rows.len(),
        rows.iter()
            .find(|r| !r[1].is_empty())
            .map_or("-", |r| r[0].as_str())
    );
    Ok(0)
}

fn kernel_table(config: &Config, manifest: &RunManifest) -> Result<i32> {
    let spec = PotentialSpec::new(
        config.get_or("n", 3)?,
        config.get_or("alpha", 1.0)?,
        config.get_or("kappa", 1.0)?,
        config.get_or("gamma", 2.0)?,
    )?;
    let k: usize = config.get_or("lattice", 20)?;
    let (lo, hi): (f64, f64) = (config.get_or("r_min", 0.1)?, config.get_or("r_max", 2.0)?);
    if k < 2 || !(lo > 0.0 && hi > lo) {
        return Err(Error::Config(
            "kernel-table needs lattice >= 2 and 0 < r_min < r_max".into(),
        ));
    }
    let pts: Vec<f64> = (0..k)
        .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
        .collect();
    let mut rows = Vec::with_capacity(k * k);
    for &r in &pts {
        for &eta in &pts {
            let kk = kernel_k(&spec, r, eta).unwrap_or(f64::NAN);
            let om = kernel_omega(&spec, r, eta).unwrap_or(f64::NAN);
            let shape = omega_bound_shape(&spec, r, eta);
            rows.push(vec![r, eta, kk, om, shape, om.abs() / shape]);
        }
    }
    manifest.write(
        "kernel_table.csv",
        &csv_string(
            manifest,
            "r,eta,K,omega,bound_shape,omega_over_shape",
            &rows,
        ),
    )?;
    println!("kernel-table: {} entries", rows.len());
    Ok(0)
}

fn sweep_epsilon(config: &Config, manifest: &RunManifest) -> Result<i32> {
    let cfg = config.solver_config(0.1)?;
    let (rho0, m0) = initial_profile(config, cfg.spec.n, cfg.b)?;
    let eps: Vec<f64> = config
        .get_list("eps_list")?
        .unwrap_or_else(|| vec![1e-1, 3e-2, 1e-2]);
    let times: Vec<f64> = config
        .get_list("times")?
        .unwrap_or_else(|| vec![0.5 * cfg.t_final, cfg.t_final]);
    let regime = validate_regime(&cfg.spec, Some(rho0.space_integral(cfg.spec.n)), None);
    report_regime(&regime);
    let report = vanishing_viscosity_sweep(&cfg, &rho0, &m0, &eps, &times)?;
    let mut rows = Vec::new();
    for p in &report.pairs {
        for (j, &t) in report.times.iter().enumerate() {
            rows.push(vec![
                p.eps_a,
                p.eps_b,
                t,
                p.l1[j],
                p.lgamma[j],
                p.l1_full[j],
            ]);
        }
    }
    manifest.write(
        "sweep.csv",
        &csv_string(manifest, "eps_a,eps_b,t,l1,lgamma,l1_full", &rows),
    )?;
    manifest.write("sweep.json", &json_string(manifest, &report)?)?;
    println!("sweep-epsilon: distances decreasing = {}", report.cauchy);
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    passed: bool,
    checks: &'a [CheckOutcome],
}

fn verify_cmd(manifest: &RunManifest) -> Result<i32> {
    let checks = verify::run_all(manifest.seed);
    let passed = checks.iter().all(|c| c.passed);
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                if c.passed { "PASS" } else { "FAIL" }.into(),
            ]
        })
        .collect();
    manifest.write("verify.csv", &csv_text(manifest, "check,status", &rows))?;
    manifest.write(
        "verify.json",
        &json_string(
            manifest,
            &VerifyOutput {
                passed,
                checks: &checks,
            },
        )?,
    )?;
    for c in &checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    Ok(if passed { 0 } else { EXIT_CHECK_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_error_kind() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(
            exit_code(&Error::BlowUp {
                t: 0.0,
                reason: "x".into()
            }),
            3
        );
        assert_eq!(
            exit_code(&Error::NonConvergence {
                iterations: 1,
                residual: 1.0
            }),
            4
        );
    }

    #[test]
    fn phase_row_for_twenty_dimensions() {
        let rows = phase_rows(200).unwrap();
        assert_eq!(rows.len(), 199);
        assert_eq!(rows[18], vec!["20".to_string(), fmt_f64(4.0), fmt_f64(5.0)]);
        assert_eq!(
            rows[17],
            vec!["19".to_string(), String::new(), String::new()]
        );
    }

    #[test]
    fn profiles_have_the_requested_mass() {
        let c = Config::parse("mass = 12\nwidth = 1\nvelocity = 0.5").unwrap();
        let (rho, m) = initial_profile(&c, 3, 3.0).unwrap();
        assert!((rho.space_integral(3) - 12.0).abs() < 1e-12);
        let r = rho.grid().nodes()[10];
        assert!((m.values()[10] - 0.5 * r * rho.values()[10]).abs() < 1e-12);
        assert!(
            initial_profile(&Config::parse("mass = 1\nprofile = box").unwrap(), 3, 3.0).is_err()
        );
    }
}
