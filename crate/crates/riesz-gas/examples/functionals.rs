//! Energies, the HLS witness and the critical mass of the subcritical band.

use riesz_gas::functionals::{
    critical_alpha_band, critical_mass, free_energy, hls_witness, interaction_energy, SharpConstant,
};
use riesz_gas::radial_kernel::PotentialSpec;
use riesz_gas::{RadialField, RadialGrid};

fn main() -> riesz_gas::Result<()> {
    let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0)?;
    let grid = RadialGrid::uniform(1e-6, 5.0, 201)?;
    let rho = RadialField::from_fn(&grid, |r| (-r * r).exp())?;
    println!(
        "interaction energy {:.8}, free energy {:.8}",
        interaction_energy(&spec, &rho)?,
        free_energy(&spec, &rho)?
    );
    let w = hls_witness(3, 1.0, &rho)?;
    println!(
        "HLS: lhs {:.6} <= rhs {:.6} (ratio {:.4})",
        w.lhs, w.rhs, w.ratio
    );
    let report = critical_mass(3, 4.0 / 3.0, 1.0, None, SharpConstant::HlsSurrogate)?;
    println!(
        "n = 3, alpha = 1, gamma = 4/3: B = {:.10}, M_c = {:.10e}",
        report.b, report.mc
    );
    for n in [19, 20, 40] {
        println!("exponent band for n = {n}: {:?}", critical_alpha_band(n)?);
    }
    Ok(())
}
