//! Numerical witnesses for the Hardy-Littlewood-Sobolev inequality, its
//! interpolated variant and the Riesz composition identity.

use super::constants::{
    b_constant_unchecked, hls_constant, riesz_composition_constant, SharpConstant,
};
use super::energy::InteractionOperator;
use crate::error::{domain, Result};
use crate::grid::RadialField;
use crate::quadrature::adaptive;
use crate::radial_kernel::{shell_power_average, surface_area_unchecked, PotentialSpec};
use serde::{Deserialize, Serialize};

/// One evaluation of `‖|·|^{−α} ∗ f‖_{L^r} ≤ C_{n,α} ‖f‖_{L^p}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HlsWitness {
    /// Exponent `p = 2n/(2n − α)`.
    pub p: f64,
    /// Exponent `r = 2n/α`.
    pub r: f64,
    /// Left-hand side.
    pub lhs: f64,
    /// Right-hand side with the closed-form constant.
    pub rhs: f64,
    /// `lhs / rhs`.
    pub ratio: f64,
    /// True when the inequality holds.
    pub holds: bool,
}

/// Evaluates the HLS inequality for a nonnegative radial `f`.
///
/// The convolution is evaluated on the grid and continued past its last node by
/// the far-field decay `|x|^{−α}`, whose `L^r` tail is added in closed form.
pub fn hls_witness(n: usize, alpha: f64, f: &RadialField) -> Result<HlsWitness> {
    let nf = n as f64;
    if !(alpha > 0.0 && alpha < nf - 1.0) {
        return domain(format!("hls_witness needs 0 < alpha < n - 1, got {alpha}"));
    }
    if f.values().iter().any(|&v| v < 0.0) {
        return domain("hls_witness needs a nonnegative density");
    }
    let spec = PotentialSpec {
        n,
        alpha,
        kappa: 1.0,
        gamma: 2.0,
    };
    let p = 2.0 * nf / (2.0 * nf - alpha);
    let r = 2.0 * nf / alpha;
    let op = InteractionOperator::new(&spec, f.grid());
    let g: Vec<f64> = op
        .potential(f.values())
        .iter()
        .map(|v| -alpha * v)
        .collect();
    let last = *g.last().expect("grid has at least two nodes");
    let big_r = f.grid().last();
    let tail = surface_area_unchecked(n) * last.abs().powf(r) * big_r.powi(n as i32) / nf;
    let g_norm =
        (op.integrate(&g.iter().map(|v| v.abs().powf(r)).collect::<Vec<_>>()) + tail).powf(1.0 / r);
    let f_norm = op
        .integrate(&f.values().iter().map(|v| v.powf(p)).collect::<Vec<_>>())
        .powf(1.0 / p);
    let rhs = hls_constant(n, alpha)? * f_norm;
    Ok(HlsWitness {
        p,
        r,
        lhs: g_norm,
        rhs,
        ratio: g_norm / rhs,
        holds: g_norm <= rhs,
    })
}

/// One evaluation of `½|∫ρΦ_α∗ρ| ≤ B M^{(γ(2n−α)−2n)/(n(γ−1))} (∫ρe(ρ))^{α/(n(γ−1))}`
/// with both integrals in radial form `∫ · r^{n−1} dr` and `M` the full mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainWitness {
    /// Constant `B_{n,γ,α}` built from the chosen sharp-constant surrogate.
    pub b: f64,
    /// Full-space mass.
    pub mass: f64,
    /// Radial interaction magnitude.
    pub lhs: f64,
    /// Radial bound.
    pub rhs: f64,
    /// True when the chain holds.
    pub holds: bool,
}

/// Evaluates the interpolated HLS chain; requires `α ∈ (0, n−1)` and `γ ≥ 2n/(2n − α)`.
pub fn variation_hls_chain(
    spec: &PotentialSpec,
    rho: &RadialField,
    sharp: SharpConstant,
) -> Result<ChainWitness> {
    let nf = spec.n as f64;
    let (a, g) = (spec.alpha, spec.gamma);
    if !(a > 0.0) || g < 2.0 * nf / (2.0 * nf - a) {
        return domain(format!(
            "the chain needs alpha > 0 and gamma >= 2n/(2n - alpha), got ({a}, {g})"
        ));
    }
    if rho.values().iter().any(|&v| v < 0.0) {
        return domain("variation_hls_chain needs a nonnegative density");
    }
    let c = sharp.value(spec.n, a)?;
    let b = b_constant_unchecked(spec.n, g, a, c);
    let w = surface_area_unchecked(spec.n);
    let op = InteractionOperator::new(spec, rho.grid());
    let mass = op.integrate(rho.values());
    let lhs = 0.5 * op.pairing(rho.values(), rho.values()).abs() / w;
    let internal = op.internal_energy(rho.values()) / w;
    let g1 = nf * (g - 1.0);
    let rhs = b * mass.powf((g * (2.0 * nf - a) - 2.0 * nf) / g1) * internal.powf(a / g1);
    Ok(ChainWitness {
        b,
        mass,
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// Composition `∫_{ℝⁿ} |x − z|^{α−n} |z|^{β−n} dz` at `|x| = radius`, together with
/// the closed form `κ_{α,β} |x|^{α+β−n}`.
///
/// The radial integral is split at `radius/2`, `radius` and `2·radius`; quartic
/// substitutions absorb the logarithmic singularity at `|z| = |x|` and the decay
/// at infinity is mapped onto a bounded interval.
pub fn composition_integral(n: usize, alpha: f64, beta: f64, radius: f64) -> Result<(f64, f64)> {
    let exact = riesz_composition_constant(n, alpha, beta)? * radius.powf(alpha + beta - n as f64);
    if !(radius > 0.0) {
        return domain("composition radius must be positive");
    }
    let nf = n as f64;
    let p = nf - alpha;
    let integrand = |s: f64| {
        if s <= 0.0 || s == radius {
            return 0.0;
        }
        s.powf(beta - 1.0) * shell_power_average(n, p, radius, s)
    };
    let rho = radius;
    let tol = 1e-11;
    let quartic =
        |a: f64, h: f64| move |t: f64| 4.0 * h.abs() * t.powi(3) * integrand(a + h * t.powi(4));
    let left = adaptive(&quartic(0.0, 0.5 * rho), 0.0, 1.0, tol).0;
    let below = adaptive(&quartic(rho, -0.5 * rho), 0.0, 1.0, tol).0;
    let above = adaptive(&quartic(rho, rho), 0.0, 1.0, tol).0;
    let tail_fn = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let tau = t.powi(4);
        let s = 2.0 * rho / tau;
        integrand(s) * 2.0 * rho / (tau * tau) * 4.0 * t.powi(3)
    };
    let tail = adaptive(&tail_fn, 0.0, 1.0, tol).0;
    Ok((left + below + above + tail, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use std::f64::consts::PI;

    #[test]
    fn composition_matches_closed_form() {
        for radius in [0.5, 1.0, 2.0] {
            let (num, exact) = composition_integral(3, 1.0, 1.0, radius).unwrap();
            assert!((exact - PI.powi(3) / radius).abs() < 1e-9 * exact);
            assert!(
                (num - exact).abs() < 1e-4 * exact,
                "{radius}: {num} vs {exact}"
            );
        }
    }

    #[test]
    fn hls_holds_for_a_gaussian() {
        let g = RadialGrid::uniform(1e-6, 6.0, 161).unwrap();
        let f = RadialField::from_fn(&g, |r| (-r * r).exp()).unwrap();
        let w = hls_witness(3, 1.0, &f).unwrap();
        assert!(w.holds, "{w:?}");
        assert!(w.ratio > 0.3, "{w:?}");
    }

    #[test]
    fn chain_holds_at_the_endpoint_exponent() {
        let spec = PotentialSpec::new(3, 1.0, 1.0, 4.0 / 3.0).unwrap();
        let g = RadialGrid::uniform(1e-6, 4.0, 121).unwrap();
        let rho = RadialField::from_fn(&g, |r| (1.0 - r * r / 4.0).max(0.0)).unwrap();
        let w = variation_hls_chain(&spec, &rho, SharpConstant::HlsSurrogate).unwrap();
        assert!(w.holds, "{w:?}");
        assert!(variation_hls_chain(
            &spec.with_alpha(1.0).clone(),
            &rho,
            SharpConstant::Explicit(-1.0)
        )
        .is_err());
    }
}
