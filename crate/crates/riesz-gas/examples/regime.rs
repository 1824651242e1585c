//! Classifies parameter sets against the existence, energy, entropy and stability ranges.

use riesz_gas::radial_kernel::PotentialSpec;
use riesz_gas::regime::validate_regime;

fn main() -> riesz_gas::Result<()> {
    let cases = [
        (3, 1.0, 1.0, 2.0, Some(1.0), None),
        (3, 1.0, 1.0, 1.25, Some(1e-9), Some(1.0)),
        (3, 1.5, -1.0, 2.5, None, None),
        (3, 1.999, 1.0, 2.0, None, None),
    ];
    for (n, alpha, kappa, gamma, mass, e0) in cases {
        let r = validate_regime(&PotentialSpec::new(n, alpha, kappa, gamma)?, mass, e0);
        println!(
            "n = {n}, alpha = {alpha}, kappa = {kappa}, gamma = {gamma}: existence {:?}, energy {:?}, BD classical {}, BD improved {}, stability {}, warnings {:?}",
            r.existence, r.energy_case, r.bd_classical, r.bd_improved, r.stability, r.warnings
        );
    }
    Ok(())
}
