//! Classification of a configuration against the hypotheses of the existence,
//! energy, entropy and stability results.
//!
//! Configurations outside every case are reported with warnings rather than
//! refused, so that exploratory runs remain possible.

use crate::functionals::{c_gamma, critical_mass, SharpConstant};
use crate::radial_kernel::PotentialSpec;
use serde::{Deserialize, Serialize};

/// Existence case of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExistenceCase {
    /// Repulsive, `α ∈ (−1, n−2]`, `γ > 1`.
    A,
    /// Repulsive, `α ∈ (n−2, n−1)`, `γ ≥ 3n/(3n − 2(1+α))`.
    B,
    /// Attractive, `α ∈ (−1, 0]`, `γ > 1`.
    C,
    /// Attractive, `α ∈ (0, n−1)`, `γ > (n+α)/n`.
    D,
    /// Attractive, `α ∈ (0, n−1)`, `γ ∈ (2n/(2n−α), (n+α)/n]` below the critical mass.
    E,
}

/// Which energy estimate applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyCase {
    /// Repulsive with `α ∈ (0, n−1)`: the energy identity itself.
    Repulsive,
    /// Attractive, `γ ∈ (2n/(2n−α), (n+α)/n]`, below the critical mass: coercive with `C_γ`.
    Subcritical,
    /// Attractive, `γ > (n+α)/n`: bounded by a constant depending on mass and energy.
    Supercritical,
    /// `α ∈ (−1, 0]`: bounded together with the `k_α` moment.
    Logarithmic,
}

/// Outcome of [`validate_regime`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    /// Spatial dimension.
    pub n: usize,
    /// Interaction exponent.
    pub alpha: f64,
    /// Interaction sign.
    pub kappa: f64,
    /// Adiabatic exponent.
    pub gamma: f64,
    /// Mass, when supplied.
    pub mass: Option<f64>,
    /// Radial initial energy, when supplied.
    pub e0: Option<f64>,
    /// Existence case, if any applies.
    pub existence: Option<ExistenceCase>,
    /// Energy estimate case, if any applies.
    pub energy_case: Option<EnergyCase>,
    /// Critical mass computed with the HLS surrogate constant, when defined.
    pub critical_mass: Option<f64>,
    /// Coercivity constant `C_γ` of the subcritical case.
    pub c_gamma: Option<f64>,
    /// The classical BD entropy estimate applies.
    pub bd_classical: bool,
    /// The BD estimate under `γ ≥ 3n/(3n − 2(1+α))` applies.
    pub bd_improved: bool,
    /// Parameters lie in the range of the stability theorem.
    pub stability: bool,
    /// Reasons why hypotheses fail or could not be checked.
    pub warnings: Vec<String>,
}

impl RegimeReport {
    /// True when some existence case applies and no warning was raised.
    pub fn is_clean(&self) -> bool {
        self.existence.is_some() && self.warnings.is_empty()
    }
}

/// Threshold `3n/(3n − 2(1+α))` of the improved entropy estimate.
pub fn bd_threshold(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    3.0 * nf / (3.0 * nf - 2.0 * (1.0 + alpha))
}

/// Classifies `spec` with optional mass and radial energy.
pub fn validate_regime(spec: &PotentialSpec, mass: Option<f64>, e0: Option<f64>) -> RegimeReport {
    let n = spec.n;
    let nf = n as f64;
    let (alpha, gamma, kappa) = (spec.alpha, spec.gamma, spec.kappa);
    let coulomb = spec.is_coulomb();
    let mut warnings = Vec::new();

    let integrability = nf - 1.0 - alpha;
    if !(integrability > 0.0 && gamma > 1.0 / integrability) {
        warnings.push(format!(
            "the hypothesis gamma > 1/(n-1-alpha) = {} fails",
            1.0 / integrability
        ));
    }
    let bd_gamma = bd_threshold(n, alpha);
    let lower = 2.0 * nf / (2.0 * nf - alpha);
    let endpoint = (nf + alpha) / nf;
    let in_band =
        alpha > 0.0 && alpha < nf - 1.0 && gamma > lower && gamma <= endpoint * (1.0 + 1e-12);

    let (critical, cg) = if kappa == 1.0 && in_band {
        match critical_mass(n, gamma, alpha, e0, SharpConstant::HlsSurrogate) {
            Ok(rep) => (
                Some(rep.mc),
                mass.and_then(|m| c_gamma(n, gamma, alpha, m, rep.b).ok()),
            ),
            Err(e) => {
                warnings.push(format!("critical mass unavailable: {e}"));
                (None, None)
            }
        }
    } else {
        (None, None)
    };
    let below_critical = match (mass, critical) {
        (Some(m), Some(mc)) => Some(m < mc),
        _ => None,
    };

    let existence = if kappa == -1.0 {
        if alpha > -1.0 && alpha <= nf - 2.0 && gamma > 1.0 {
            Some(ExistenceCase::A)
        } else if alpha > nf - 2.0 && alpha < nf - 1.0 && gamma >= bd_gamma {
            Some(ExistenceCase::B)
        } else {
            None
        }
    } else if kappa == 1.0 {
        let extra = coulomb || gamma >= bd_gamma;
        if !extra {
            warnings.push(format!(
                "attractive case with alpha != n-2 needs gamma >= {bd_gamma}"
            ));
        }
        if !extra {
            None
        } else if alpha > -1.0 && alpha <= 0.0 && gamma > 1.0 {
            Some(ExistenceCase::C)
        } else if alpha > 0.0 && alpha < nf - 1.0 && gamma > endpoint * (1.0 + 1e-12) {
            Some(ExistenceCase::D)
        } else if in_band {
            match below_critical {
                Some(true) => Some(ExistenceCase::E),
                Some(false) => {
                    warnings.push("mass is not below the critical mass".into());
                    None
                }
                None => {
                    warnings.push("subcritical exponent: the critical-mass condition needs the mass (and E0 below the endpoint)".into());
                    None
                }
            }
        } else {
            None
        }
    } else {
        warnings.push(format!("kappa = {kappa} is neither +1 nor -1"));
        None
    };
    if existence.is_none() && warnings.is_empty() {
        warnings.push("no existence case covers this configuration".into());
    }

    let energy_case = if alpha > -1.0 && alpha <= 0.0 && gamma > 1.0 {
        Some(EnergyCase::Logarithmic)
    } else if alpha > 0.0 && alpha < nf - 1.0 && kappa == -1.0 && gamma > 1.0 {
        Some(EnergyCase::Repulsive)
    } else if alpha > 0.0 && alpha < nf - 1.0 && kappa == 1.0 && gamma > endpoint * (1.0 + 1e-12) {
        Some(EnergyCase::Supercritical)
    } else if kappa == 1.0 && in_band && below_critical == Some(true) {
        Some(EnergyCase::Subcritical)
    } else {
        None
    };

    let bd_classical =
        (kappa == -1.0 && alpha > -1.0 && alpha <= nf - 2.0) || (kappa == 1.0 && coulomb);
    let bd_improved = alpha > -1.0 && alpha < nf - 1.0 && gamma >= bd_gamma;
    let stability = kappa == 1.0 && alpha > 0.0 && alpha < nf - 1.0 && gamma > endpoint;

    RegimeReport {
        n,
        alpha,
        kappa,
        gamma,
        mass,
        e0,
        existence,
        energy_case,
        critical_mass: critical,
        c_gamma: cg,
        bd_classical,
        bd_improved,
        stability,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, alpha: f64, kappa: f64, gamma: f64) -> PotentialSpec {
        PotentialSpec::new(n, alpha, kappa, gamma).unwrap()
    }

    #[test]
    fn newtonian_polytrope_is_supercritical() {
        let r = validate_regime(&spec(3, 1.0, 1.0, 2.0), Some(1.0), None);
        assert_eq!(r.existence, Some(ExistenceCase::D));
        assert_eq!(r.energy_case, Some(EnergyCase::Supercritical));
        assert!(r.bd_improved && r.bd_classical && r.stability);
        assert!(r.is_clean());
    }

    #[test]
    fn subcritical_band_needs_the_mass() {
        let s = spec(3, 1.0, 1.0, 1.25);
        let without = validate_regime(&s, None, None);
        assert_eq!(without.existence, None);
        assert!(!without.warnings.is_empty());
        let small = validate_regime(&s, Some(1e-9), Some(1.0));
        assert_eq!(small.existence, Some(ExistenceCase::E));
        assert_eq!(small.energy_case, Some(EnergyCase::Subcritical));
        assert!(small.critical_mass.unwrap() > 1e-9);
        let large = validate_regime(&s, Some(1e6), Some(1.0));
        assert_eq!(large.existence, None);
    }

    #[test]
    fn integrability_hypothesis_degenerates_near_the_edge() {
        let r = validate_regime(&spec(3, 1.999, 1.0, 2.0), Some(1.0), None);
        assert!(r.warnings.iter().any(|w| w.contains("1/(n-1-alpha)")));
    }

    #[test]
    fn repulsive_cases() {
        assert_eq!(
            validate_regime(&spec(3, 0.5, -1.0, 1.1), None, None).existence,
            Some(ExistenceCase::A)
        );
        assert_eq!(
            validate_regime(&spec(3, 1.5, -1.0, 2.5), None, None).existence,
            Some(ExistenceCase::B)
        );
        assert_eq!(
            validate_regime(&spec(3, 1.5, -1.0, 1.1), None, None).existence,
            None
        );
        assert_eq!(
            validate_regime(&spec(2, 0.0, -1.0, 1.5), None, None).energy_case,
            Some(EnergyCase::Logarithmic)
        );
    }
}
