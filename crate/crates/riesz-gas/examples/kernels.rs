//! Radial Riesz kernels: closed forms, quadrature and the Newtonian shell theorem.

use riesz_gas::radial_kernel::{
    coulomb_local_derivative, kernel_k, kernel_k_quadrature, kernel_omega, potential_derivative,
    PotentialSpec,
};
use riesz_gas::{RadialField, RadialGrid};

fn main() -> riesz_gas::Result<()> {
    let newton = PotentialSpec::new(3, 1.0, 1.0, 2.0)?;
    let soft = PotentialSpec::new(3, 0.5, 1.0, 2.0)?;
    for (r, eta) in [(0.5, 1.0), (1.0, 0.5), (2.0, 1.5)] {
        println!(
            "r = {r}, eta = {eta}: K_newton = {:.10}, K_quadrature = {:.10}, omega_newton = {:.6}, K_soft = {:.6}",
            kernel_k(&newton, r, eta)?,
            kernel_k_quadrature(&newton, r, eta)?,
            kernel_omega(&newton, r, eta)?,
            kernel_k(&soft, r, eta)?,
        );
    }
    let grid = RadialGrid::uniform(1e-6, 3.0, 64)?;
    let rho = RadialField::from_fn(&grid, |r| (-r * r).exp())?;
    let force = potential_derivative(&newton, &rho)?;
    let local = coulomb_local_derivative(3, &rho);
    let worst = force
        .values()
        .iter()
        .zip(local.values())
        .skip(1)
        .map(|(a, b)| (a - b).abs() / b.abs())
        .fold(0.0, f64::max);
    println!(
        "kernel force vs enclosed-mass force on 64 nodes: max relative difference {worst:.2e}"
    );
    Ok(())
}
