//! Lane-Emden steady states by the fixed point and by the gradient-flow oracle.

use riesz_gas::radial_kernel::PotentialSpec;
use riesz_gas::steady_states::{
    euler_lagrange_residual, gradient_flow_oracle, relative_l1, solve_minimizer,
    GradientFlowOptions,
};
use riesz_gas::RadialGrid;

fn main() -> riesz_gas::Result<()> {
    let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0)?;
    let grid = RadialGrid::uniform(1e-6, 0.6, 301)?;
    for mass in [0.5, 1.0, 2.0] {
        let fp = solve_minimizer(&spec, mass, &grid, 1e-10)?;
        let gf = gradient_flow_oracle(&spec, mass, &grid, &GradientFlowOptions::default())?;
        let (res, _) = euler_lagrange_residual(&spec, &fp)?;
        println!(
            "M = {mass}: support radius {:.8} (sqrt(pi)/4 = {:.8}), lambda {:.6}, G = {:.6}, EL residual {res:.1e}, oracle L1 {:.1e}",
            fp.support_radius,
            std::f64::consts::PI.sqrt() / 4.0,
            fp.lambda,
            fp.free_energy,
            relative_l1(3, &fp.profile, &gf.profile)?
        );
    }
    Ok(())
}
