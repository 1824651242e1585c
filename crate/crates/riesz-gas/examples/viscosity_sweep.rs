//! Distances between runs with decreasing viscosity for a smooth Gaussian bulk.

use riesz_gas::nsr_solver::{vanishing_viscosity_sweep, ForcePath, SolverConfig};
use riesz_gas::radial_kernel::PotentialSpec;
use riesz_gas::{RadialField, RadialGrid};

fn main() -> riesz_gas::Result<()> {
    let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0)?;
    let grid = RadialGrid::uniform(1e-6, 2.0, 201)?;
    let rho0 = RadialField::from_fn(&grid, |r| 2.0 * (-r * r).exp())?;
    let mut cfg = SolverConfig::new(spec, 0.1, 3.0, 256, 0.2);
    cfg.force_path = ForcePath::CoulombLocal;
    let report = vanishing_viscosity_sweep(
        &cfg,
        &rho0,
        &RadialField::zeros(&grid),
        &[1e-1, 3e-2, 1e-2],
        &[0.1, 0.2],
    )?;
    for p in &report.pairs {
        println!(
            "eps {} vs {}: L1 on r <= {} = {:?}, whole annulus = {:?}",
            p.eps_a, p.eps_b, report.window, p.l1, p.l1_full
        );
    }
    println!("final distances decrease: {}", report.cauchy);
    Ok(())
}
