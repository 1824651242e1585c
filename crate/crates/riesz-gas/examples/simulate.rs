//! Evolves approximating initial data with the Lagrangian solver and prints diagnostics.

use riesz_gas::nsr_solver::{build_initial_data, run, ForcePath, SolverConfig, DIAGNOSTICS_HEADER};
use riesz_gas::radial_kernel::PotentialSpec;
use riesz_gas::{RadialField, RadialGrid};

fn main() -> riesz_gas::Result<()> {
    let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0)?;
    let grid = RadialGrid::uniform(1e-6, 1.0, 201)?;
    let rho0 = RadialField::from_fn(&grid, |r| 5.0 * (1.0 - r * r))?;
    let mut cfg = SolverConfig::new(spec, 0.05, 3.0, 128, 0.2);
    cfg.force_path = ForcePath::CoulombLocal;
    let init = build_initial_data(
        &spec,
        &rho0,
        &RadialField::zeros(&grid),
        cfg.epsilon,
        cfg.b,
        cfg.cells,
    )?;
    let traj = run(&cfg, &init)?;
    println!("{DIAGNOSTICS_HEADER}");
    for row in &traj.rows {
        let cols: Vec<String> = row.columns().iter().map(|v| format!("{v:.6e}")).collect();
        println!("{}", cols.join(","));
    }
    println!(
        "{} steps, final outer radius {:.6}",
        traj.steps, traj.final_state.b_t
    );
    Ok(())
}
