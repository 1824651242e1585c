//! Closed-form constants and the critical-mass arithmetic.

use crate::error::{domain, Result};
use crate::radial_kernel::surface_area_unchecked;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Tolerance used to recognise the endpoint `γ = (n+α)/n`.
const ENDPOINT_TOL: f64 = 1e-12;

/// Sharp Hardy-Littlewood-Sobolev constant
/// `C_{n,α} = π^{α/2} Γ((n−α)/2)/Γ(n−α/2) · (Γ(n/2)/Γ(n))^{(α−n)/n}` for `α ∈ (0, n)`.
pub fn hls_constant(n: usize, alpha: f64) -> Result<f64> {
    let nf = n as f64;
    if !(alpha > 0.0 && alpha < nf) || n < 1 {
        return domain(format!(
            "hls_constant needs 0 < alpha < n, got alpha = {alpha}, n = {n}"
        ));
    }
    Ok(
        PI.powf(alpha / 2.0) * gamma((nf - alpha) / 2.0) / gamma(nf - alpha / 2.0)
            * (gamma(nf / 2.0) / gamma(nf)).powf((alpha - nf) / nf),
    )
}

/// Riesz composition constant `κ_{α,β}` with `(|·|^{α−n} ∗ |·|^{β−n})(x) = κ_{α,β} |x|^{α+β−n}`.
pub fn riesz_composition_constant(n: usize, alpha: f64, beta: f64) -> Result<f64> {
    let nf = n as f64;
    if !(alpha > 0.0 && alpha < nf && beta > 0.0 && beta < nf && alpha + beta < nf) {
        return domain(format!(
            "composition needs 0 < alpha, beta and alpha + beta < n; got {alpha}, {beta}, n = {n}"
        ));
    }
    Ok(PI.powf(nf / 2.0)
        * gamma(alpha / 2.0)
        * gamma(beta / 2.0)
        * gamma((nf - alpha - beta) / 2.0)
        / (gamma((nf - alpha) / 2.0) * gamma((nf - beta) / 2.0) * gamma((alpha + beta) / 2.0)))
}

/// Normalising constant `c_{n,α} = 2^{n−α} π^{n/2} Γ((n−α)/2)/(α Γ(α/2))`, and `2π` for `(n, α) = (2, 0)`.
pub fn fractional_laplacian_constant(n: usize, alpha: f64) -> Result<f64> {
    let nf = n as f64;
    if n == 2 && alpha == 0.0 {
        return Ok(2.0 * PI);
    }
    if !(alpha > 0.0_f64.max(nf - 2.0) && alpha < nf) {
        return domain(format!(
            "fractional_laplacian_constant needs max(0, n-2) < alpha < n, got {alpha}"
        ));
    }
    Ok(
        2f64.powf(nf - alpha) * PI.powf(nf / 2.0) * gamma((nf - alpha) / 2.0)
            / (alpha * gamma(alpha / 2.0)),
    )
}

/// Endpoints `α_± = (n − 2 ± √(n² − 20n + 4))/4` of the exponent band, when real.
pub fn critical_alpha_band(n: usize) -> Result<Option<(f64, f64)>> {
    if n < 2 {
        return domain("critical_alpha_band needs n >= 2");
    }
    let nf = n as f64;
    let disc = nf * nf - 20.0 * nf + 4.0;
    if disc < 0.0 {
        return Ok(None);
    }
    let s = disc.sqrt();
    Ok(Some(((nf - 2.0 - s) / 4.0, (nf - 2.0 + s) / 4.0)))
}

fn check_case_two(n: usize, gamma_: f64, alpha: f64) -> Result<()> {
    let nf = n as f64;
    if !(alpha > 0.0 && alpha < nf) {
        return domain(format!("alpha = {alpha} must lie in (0, n)"));
    }
    let lo = 2.0 * nf / (2.0 * nf - alpha);
    let hi = (nf + alpha) / nf;
    if !(gamma_ > lo && gamma_ <= hi * (1.0 + ENDPOINT_TOL)) {
        return domain(format!("gamma = {gamma_} outside ({lo}, {hi}]"));
    }
    Ok(())
}

/// `B_{n,γ,α} = C/(2α) · ω_n^{α/(n(γ−1)) − 1} · ((γ−1)/a₀)^{α/(n(γ−1))}` for `γ ∈ (2n/(2n−α), (n+α)/n]`.
pub fn b_constant(n: usize, gamma_: f64, alpha: f64, sharp_constant: f64) -> Result<f64> {
    check_case_two(n, gamma_, alpha)?;
    if !(sharp_constant > 0.0) {
        return domain("sharp constant must be positive");
    }
    Ok(b_constant_unchecked(n, gamma_, alpha, sharp_constant))
}

pub(crate) fn b_constant_unchecked(n: usize, gamma_: f64, alpha: f64, c: f64) -> f64 {
    let q = alpha / (n as f64 * (gamma_ - 1.0));
    let a0 = (gamma_ - 1.0).powi(2) / (4.0 * gamma_);
    c / (2.0 * alpha) * surface_area_unchecked(n).powf(q - 1.0) * ((gamma_ - 1.0) / a0).powf(q)
}

/// Which value stands in for the sharp constant of the variation of HLS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SharpConstant {
    /// The closed-form HLS constant `C_{n,α}`, an upper bound of the sharp value.
    HlsSurrogate,
    /// A caller-supplied value.
    Explicit(f64),
}

impl SharpConstant {
    /// Numeric value for `(n, α)`.
    pub fn value(&self, n: usize, alpha: f64) -> Result<f64> {
        match *self {
            SharpConstant::HlsSurrogate => hls_constant(n, alpha),
            SharpConstant::Explicit(c) if c > 0.0 => Ok(c),
            SharpConstant::Explicit(c) => {
                domain(format!("explicit sharp constant {c} must be positive"))
            }
        }
    }
}

/// Critical mass together with the configuration it was computed for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalMassReport {
    /// Spatial dimension.
    pub n: usize,
    /// Interaction exponent.
    pub alpha: f64,
    /// Adiabatic exponent.
    pub gamma: f64,
    /// Radial initial energy used by the sub-endpoint branch.
    pub e0: Option<f64>,
    /// The constant `B_{n,γ,α}`.
    pub b: f64,
    /// Critical mass.
    pub mc: f64,
    /// Constant substituted for the sharp one.
    pub constant_used: SharpConstant,
    /// Numeric value of that constant.
    pub constant_value: f64,
    /// True when the surrogate makes `mc` a conservative lower bound of the sharp critical mass.
    pub conservative_lower_bound: bool,
}

/// Critical mass: `B^{−n/(n−α)}` at `γ = (n+α)/n`, otherwise
/// `(αB/(n(γ−1)))^{n(γ−1)/D} (αE₀/(α−n(γ−1)))^{(α−n(γ−1))/D}` with `D = 2n − γ(2n−α)`.
///
/// `e0` is the radial energy `∫ ρ₀(½u₀² + e(ρ₀) + ½Φ_α∗ρ₀) r^{n−1} dr`.
pub fn critical_mass(
    n: usize,
    gamma_: f64,
    alpha: f64,
    e0: Option<f64>,
    sharp: SharpConstant,
) -> Result<CriticalMassReport> {
    check_case_two(n, gamma_, alpha)?;
    let c = sharp.value(n, alpha)?;
    let b = b_constant_unchecked(n, gamma_, alpha, c);
    let nf = n as f64;
    let endpoint = (gamma_ - (nf + alpha) / nf).abs() <= ENDPOINT_TOL * gamma_;
    let mc = if endpoint {
        b.powf(-nf / (nf - alpha))
    } else {
        let e0v = match e0 {
            Some(e) if e > 0.0 => e,
            _ => return domain("the sub-endpoint critical mass needs a positive energy E0"),
        };
        let g1 = nf * (gamma_ - 1.0);
        let d = 2.0 * nf - gamma_ * (2.0 * nf - alpha);
        (alpha * b / g1).powf(g1 / d) * (alpha * e0v / (alpha - g1)).powf((alpha - g1) / d)
    };
    Ok(CriticalMassReport {
        n,
        alpha,
        gamma: gamma_,
        e0: if endpoint { None } else { e0 },
        b,
        mc,
        constant_used: sharp,
        constant_value: c,
        conservative_lower_bound: matches!(sharp, SharpConstant::HlsSurrogate),
    })
}

/// Coercivity constant `C_γ`: `1 − B M^{(n−α)/n}` at the endpoint, `(α − n(γ−1))/α` below it.
pub fn c_gamma(n: usize, gamma_: f64, alpha: f64, mass: f64, b: f64) -> Result<f64> {
    check_case_two(n, gamma_, alpha)?;
    let nf = n as f64;
    if (gamma_ - (nf + alpha) / nf).abs() <= ENDPOINT_TOL * gamma_ {
        Ok(1.0 - b * mass.powf((nf - alpha) / nf))
    } else {
        Ok((alpha - nf * (gamma_ - 1.0)) / alpha)
    }
}

/// The scalar map `F(s) = s − B M^{a} s^{q}` with its first two derivatives,
/// `a = (γ(2n−α) − 2n)/(n(γ−1))` and `q = α/(n(γ−1))`.
pub fn concavity_map(
    n: usize,
    gamma_: f64,
    alpha: f64,
    mass: f64,
    b: f64,
    s: f64,
) -> (f64, f64, f64) {
    let nf = n as f64;
    let g1 = nf * (gamma_ - 1.0);
    let a = (gamma_ * (2.0 * nf - alpha) - 2.0 * nf) / g1;
    let q = alpha / g1;
    let k = b * mass.powf(a);
    let f = s - k * s.powf(q);
    let f1 = 1.0 - q * k * s.powf(q - 1.0);
    let f2 = -alpha * (alpha - g1) / (g1 * g1) * k * s.powf((alpha - 2.0 * g1) / g1);
    (f, f1, f2)
}

/// Critical point `s_* = (αB/(n(γ−1)))^{n(γ−1)/(n(γ−1)−α)} M^{(γ(2n−α)−2n)/(n(γ−1)−α)}` of `F`.
pub fn critical_point(n: usize, gamma_: f64, alpha: f64, mass: f64, b: f64) -> f64 {
    let nf = n as f64;
    let g1 = nf * (gamma_ - 1.0);
    (alpha * b / g1).powf(g1 / (g1 - alpha))
        * mass.powf((gamma_ * (2.0 * nf - alpha) - 2.0 * nf) / (g1 - alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hls_constant_in_three_dimensions() {
        // Γ(1) = 1, Γ(5/2) = 3√π/4, Γ(3/2) = √π/2, Γ(3) = 2.
        let exact = 4.0 / 3.0 * (4.0 / PI.sqrt()).powf(2.0 / 3.0);
        assert!((hls_constant(3, 1.0).unwrap() - exact).abs() < 1e-13);
        let exact2 = PI.powf(1.5) * (4.0 / PI.sqrt()).powf(1.0 / 3.0);
        assert!((hls_constant(3, 2.0).unwrap() - exact2).abs() < 1e-12);
        assert!(hls_constant(3, 3.0).is_err());
    }

    #[test]
    fn composition_constant_values() {
        assert!((riesz_composition_constant(3, 1.0, 1.0).unwrap() - PI.powi(3)).abs() < 1e-11);
        let a = riesz_composition_constant(5, 1.3, 2.1).unwrap();
        let b = riesz_composition_constant(5, 2.1, 1.3).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        assert!(riesz_composition_constant(3, 2.0, 1.0).is_err());
    }

    #[test]
    fn fractional_laplacian_values() {
        assert_eq!(fractional_laplacian_constant(2, 0.0).unwrap(), 2.0 * PI);
        assert!((fractional_laplacian_constant(3, 2.0).unwrap() - PI * PI).abs() < 1e-12);
        assert!(fractional_laplacian_constant(3, 0.5).is_err());
    }

    #[test]
    fn band_endpoints() {
        assert_eq!(critical_alpha_band(20).unwrap(), Some((4.0, 5.0)));
        assert_eq!(critical_alpha_band(19).unwrap(), None);
    }

    #[test]
    fn endpoint_branch_ignores_energy() {
        let r = critical_mass(3, 4.0 / 3.0, 1.0, None, SharpConstant::HlsSurrogate).unwrap();
        assert!(r.conservative_lower_bound);
        assert!((r.b - 8.0 * hls_constant(3, 1.0).unwrap()).abs() < 1e-12);
        assert!((r.mc - r.b.powf(-1.5)).abs() < 1e-15);
        assert!(critical_mass(3, 1.1, 1.0, None, SharpConstant::HlsSurrogate).is_err());
    }

    #[test]
    fn sub_endpoint_branch_balances_the_energy() {
        let (n, g, a, e0) = (3, 1.25, 1.0, 0.7);
        let r = critical_mass(n, g, a, Some(e0), SharpConstant::HlsSurrogate).unwrap();
        let s = critical_point(n, g, a, r.mc, r.b);
        let (f, f1, f2) = concavity_map(n, g, a, r.mc, r.b, s);
        assert!((f - e0).abs() < 1e-10 * e0, "{f} vs {e0}");
        assert!(f1.abs() < 1e-10);
        assert!(f2 < 0.0);
    }
}
