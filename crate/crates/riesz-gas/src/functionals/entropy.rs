//! The weak entropy pair generated by `ψ(s) = ½ s|s|` and its growth bounds.

use crate::error::{domain, Result};
use crate::quadrature::gauss_legendre;
use serde::{Deserialize, Serialize};

const NODES: usize = 64;

const GRADING_LEVELS: i32 = 30;

fn gl_panel(rule: &[(f64, f64)], a: f64, b: f64, f: &impl Fn(f64) -> f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.iter().map(|&(x, w)| w * h * f(c + h * x)).sum()
}

/// Integrates `g(s) (1 − s²)^𝔟` over `[a, b] ⊂ [−1, 1]`, substituting `s = ±(1 − τ²)`
/// on pieces that touch an endpoint when `𝔟 < 0`.
///
/// After the substitution the integrand behaves like `τ^{2/(γ−1)}` at `τ = 0`, so
/// the `τ`-interval is graded geometrically toward zero.
fn weighted_integral(g: &impl Fn(f64) -> f64, bexp: f64, a: f64, b: f64) -> f64 {
    let rule = gauss_legendre(NODES);
    let endpoint = if bexp < 0.0 && b >= 1.0 {
        Some((1.0 - a, -1.0, 1.0))
    } else if bexp < 0.0 && a <= -1.0 {
        Some((b + 1.0, 1.0, -1.0))
    } else {
        None
    };
    match endpoint {
        Some((span, sign, end)) => {
            let f = |t: f64| {
                let s = end + sign * t * t;
                g(s) * (t * t * (2.0 - t * t)).powf(bexp) * 2.0 * t
            };
            let t_max = span.sqrt();
            let mut total = 0.0;
            let mut hi = t_max;
            for _ in 0..GRADING_LEVELS {
                let lo = 0.5 * hi;
                total += gl_panel(rule, lo, hi, &f);
                hi = lo;
            }
            total + gl_panel(rule, 0.0, hi, &f)
        }
        None => gl_panel(rule, a, b, &|s: f64| {
            g(s) * (1.0 - s * s).max(0.0).powf(bexp)
        }),
    }
}

fn split_integral(g: impl Fn(f64) -> f64, bexp: f64, kink: Option<f64>) -> f64 {
    let mut breaks = vec![-1.0, 0.0, 1.0];
    if let Some(k) = kink {
        if k > -1.0 && k < 1.0 && k != 0.0 {
            breaks.push(k);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks
        .windows(2)
        .map(|w| weighted_integral(&g, bexp, w[0], w[1]))
        .sum()
}

/// The pair `(η^#, q^#)` at density `rho` and velocity `u`:
/// `η^# = ½ρ ∫ (u + ρ^θ s)|u + ρ^θ s| (1 − s²)_+^𝔟 ds` and
/// `q^# = ½ρ ∫ (u + θρ^θ s)(u + ρ^θ s)|u + ρ^θ s| (1 − s²)_+^𝔟 ds`
/// with `θ = (γ − 1)/2` and `𝔟 = (3 − γ)/(2(γ − 1))`.
pub fn entropy_pair(rho: f64, u: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(gamma > 1.0) {
        return domain(format!("entropy pair needs gamma > 1, got {gamma}"));
    }
    if !(rho >= 0.0) || !u.is_finite() {
        return domain(format!(
            "entropy pair needs rho >= 0 and finite u, got ({rho}, {u})"
        ));
    }
    if rho == 0.0 {
        return Ok((0.0, 0.0));
    }
    let theta = 0.5 * (gamma - 1.0);
    let bexp = (3.0 - gamma) / (2.0 * (gamma - 1.0));
    let c = rho.powf(theta);
    let kink = Some(-u / c);
    let eta = split_integral(
        |s| {
            let v = u + c * s;
            v * v.abs()
        },
        bexp,
        kink,
    );
    let q = split_integral(
        |s| {
            let v = u + c * s;
            (u + theta * c * s) * v * v.abs()
        },
        bexp,
        kink,
    );
    Ok((0.5 * rho * eta, 0.5 * rho * q))
}

/// Outcome of fitting one constant to both growth bounds of the entropy pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyBoundsReport {
    /// Adiabatic exponent.
    pub gamma: f64,
    /// Fitted constant, the largest ratio seen on the lattice.
    pub constant: f64,
    /// Number of lattice points evaluated.
    pub points: usize,
    /// Smallest `q^#` at a point with positive density.
    pub min_flux: f64,
    /// True when the fitted constant is finite and `q^# > 0` wherever `ρ > 0`.
    pub passed: bool,
}

/// Fits `C_γ` so that `|η^#| ≤ C(ρu² + ρ^γ)` and `q^# ≥ C^{−1}(ρ|u|³ + ρ^{γ+θ})`
/// on the lattice `rhos × us`, and reports whether one finite constant suffices.
pub fn entropy_bounds_check(rhos: &[f64], us: &[f64], gamma: f64) -> Result<EntropyBoundsReport> {
    let theta = 0.5 * (gamma - 1.0);
    let mut constant: f64 = 1.0;
    let mut min_flux = f64::INFINITY;
    let mut positive = true;
    let mut points = 0;
    for &rho in rhos {
        for &u in us {
            let (eta, q) = entropy_pair(rho, u, gamma)?;
            points += 1;
            if rho == 0.0 {
                continue;
            }
            let upper = rho * u * u + rho.powf(gamma);
            let lower = rho * u.abs().powi(3) + rho.powf(gamma + theta);
            constant = constant.max(eta.abs() / upper);
            min_flux = min_flux.min(q);
            if q > 0.0 {
                constant = constant.max(lower / q);
            } else {
                positive = false;
            }
        }
    }
    Ok(EntropyBoundsReport {
        gamma,
        constant,
        points,
        min_flux,
        passed: positive && constant.is_finite(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive;
    use proptest::prelude::*;

    #[test]
    fn vacuum_and_symmetric_cases() {
        assert_eq!(entropy_pair(0.0, 3.0, 2.0).unwrap(), (0.0, 0.0));
        let (eta, q) = entropy_pair(1.0, 0.0, 3.0).unwrap();
        assert!(eta.abs() < 1e-15);
        assert!((q - 0.25).abs() < 1e-13, "{q}");
        assert!(entropy_pair(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn matches_adaptive_quadrature_with_kink() {
        // γ = 5/3 gives 𝔟 = 1, a smooth weight, so plain adaptive quadrature is a fair oracle.
        let (rho, u, gamma): (f64, f64, f64) = (0.7, 0.3, 5.0 / 3.0);
        let theta = 0.5 * (gamma - 1.0);
        let c = rho.powf(theta);
        let f = |s: f64| {
            let v = u + c * s;
            v * v.abs() * (1.0 - s * s)
        };
        let k = -u / c;
        let exact = 0.5 * rho * (adaptive(&f, -1.0, k, 1e-14).0 + adaptive(&f, k, 1.0, 1e-14).0);
        let (eta, _) = entropy_pair(rho, u, gamma).unwrap();
        assert!((eta - exact).abs() < 1e-12, "{eta} vs {exact}");
    }

    #[test]
    fn singular_weight_is_handled() {
        // γ = 5 gives 𝔟 = −1/4; at u = 0 the flux integral has the closed form
        // ½ρ θ ρ^{3θ} ∫ |s|³ (1 − s²)^𝔟 ds = ½ρ θ ρ^{3θ} B(2, 𝔟 + 1).
        let (rho, gamma): (f64, f64) = (1.3, 5.0);
        let theta = 2.0;
        let bexp = -0.25;
        let beta = 1.0 / ((bexp + 1.0) * (bexp + 2.0));
        let exact = 0.5 * rho * theta * rho.powf(3.0 * theta) * beta;
        let (_, q) = entropy_pair(rho, 0.0, gamma).unwrap();
        assert!((q - exact).abs() < 1e-10 * exact, "{q} vs {exact}");
    }

    #[test]
    fn lattice_bounds_for_gamma_two() {
        let r = entropy_bounds_check(&[0.0, 0.1, 1.0, 10.0], &[-2.0, 0.0, 2.0], 2.0).unwrap();
        assert!(r.passed);
        assert_eq!(r.points, 12);
        assert!(r.min_flux > 0.0);
    }

    proptest! {
        #[test]
        fn flux_positive_and_eta_odd_in_u(rho in 1e-3f64..10.0, u in -5.0f64..5.0, gamma in 1.1f64..4.0) {
            let (eta, q) = entropy_pair(rho, u, gamma).unwrap();
            let (eta_m, q_m) = entropy_pair(rho, -u, gamma).unwrap();
            prop_assert!(q > 0.0);
            prop_assert!((eta + eta_m).abs() <= 1e-10 * (1.0 + eta.abs()));
            prop_assert!((q - q_m).abs() <= 1e-10 * (1.0 + q.abs()));
        }
    }
}
