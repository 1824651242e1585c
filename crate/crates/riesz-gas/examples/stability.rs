//! Tracks the stability functional after a velocity kick of the Lane-Emden star.

use riesz_gas::stability_experiments::{stability_run, Perturbation, PerturbationMode};
use riesz_gas::verify::stability_setup;

fn main() -> riesz_gas::Result<()> {
    let (spec, steady, solver) = stability_setup()?;
    let report = stability_run(
        &spec,
        &steady,
        Perturbation {
            mode: PerturbationMode::Velocity,
            amplitude: 1e-2,
        },
        &solver,
    )?;
    for (t, f) in report.times.iter().zip(&report.functional) {
        println!("t = {t:.4}: functional {f:.6e}");
    }
    println!(
        "ratio max/initial {:.4}, identity defect {:.1e}, cross-term ratio {:.3}, projection floor {:.3e}",
        report.ratio, report.identity_defect, report.cross_term_ratio, report.projection_floor
    );
    Ok(())
}
