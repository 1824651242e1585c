//! Riesz and logarithmic interaction kernels reduced to radial form.
//!
//! For a radial density the interaction potential and its radial derivative are
//! one-dimensional integrals against the angular kernels
//!
//! ```text
//! K(r, η) = ∫_{S^{n-1}} Φ_α(|r e₁ − η y|) dσ(y)
//! ω(r, η) = ∫_{S^{n-1}} ∇Φ_α(r e₁ − η y)·e₁ dσ(y)
//! ```
//!
//! which are evaluated by polyspherical reduction to an integral in the polar
//! angle θ with weight `sin^{n-2} θ` and prefactor `|S^{n-2}|`. The prefactor is
//! the one for which the Coulomb case `α = n − 2` reproduces Newton's shell
//! theorem `ω(r, η) = ω_n 1_{(0,r)}(η) / r^{n-1}` exactly.

use crate::error::{domain, Error, Result};
use crate::grid::RadialField;
use crate::kernel_matrix::{KernelKind, KernelMatrix};
use crate::quadrature;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Relative tolerance of the angular θ-integration.
pub const ANGULAR_TOL: f64 = 1e-12;

/// Interaction configuration together with the pressure law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    /// Spatial dimension.
    pub n: usize,
    /// Interaction exponent α.
    pub alpha: f64,
    /// Sign of the interaction: −1 repulsive, +1 attractive.
    pub kappa: f64,
    /// Adiabatic exponent γ of the pressure law `p = a₀ ρ^γ`.
    pub gamma: f64,
}

impl PotentialSpec {
    /// Builds a validated specification with `n ≥ 2`, `α ∈ (−1, n−1)`, `κ = ±1`, `γ > 1`.
    pub fn new(n: usize, alpha: f64, kappa: f64, gamma: f64) -> Result<Self> {
        if n < 2 {
            return domain(format!("dimension n = {n} must be at least 2"));
        }
        if !(alpha > -1.0 && alpha < n as f64 - 1.0) {
            return domain(format!("alpha = {alpha} must lie in (-1, {})", n - 1));
        }
        if kappa != 1.0 && kappa != -1.0 {
            return domain(format!("kappa = {kappa} must be +1 or -1"));
        }
        if !(gamma > 1.0) || !gamma.is_finite() {
            return domain(format!("gamma = {gamma} must exceed 1"));
        }
        Ok(Self {
            n,
            alpha,
            kappa,
            gamma,
        })
    }

    /// Pressure constant `a₀ = (γ−1)²/(4γ)`, recomputed on every call.
    pub fn a0(&self) -> f64 {
        (self.gamma - 1.0).powi(2) / (4.0 * self.gamma)
    }

    /// Pressure `p(ρ) = a₀ ρ^γ`.
    pub fn pressure(&self, rho: f64) -> f64 {
        self.a0() * rho.powf(self.gamma)
    }

    /// Specific internal energy `e(ρ) = a₀ ρ^{γ−1}/(γ−1)`.
    pub fn internal_energy_density(&self, rho: f64) -> f64 {
        self.a0() * rho.powf(self.gamma - 1.0) / (self.gamma - 1.0)
    }

    /// Enthalpy `(ρ e(ρ))' = a₀ γ ρ^{γ−1}/(γ−1)`.
    pub fn enthalpy(&self, rho: f64) -> f64 {
        self.a0() * self.gamma * rho.powf(self.gamma - 1.0) / (self.gamma - 1.0)
    }

    /// Sound speed `√(a₀ γ ρ^{γ−1})`.
    pub fn sound_speed(&self, rho: f64) -> f64 {
        (self.a0() * self.gamma * rho.powf(self.gamma - 1.0)).sqrt()
    }

    /// True in the Newtonian case `α = n − 2`.
    pub fn is_coulomb(&self) -> bool {
        (self.alpha - (self.n as f64 - 2.0)).abs() < 1e-14
    }

    /// Copy with a different exponent (unvalidated; used by experiments and limits).
    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }

    /// Copy with a different interaction sign.
    pub fn with_kappa(&self, kappa: f64) -> Self {
        Self { kappa, ..*self }
    }
}

/// Surface area `ω_n = 2π^{n/2}/Γ(n/2)` of the unit sphere in `ℝⁿ`.
pub fn surface_area(n: usize) -> Result<f64> {
    if n < 1 {
        return domain("surface_area needs n >= 1");
    }
    Ok(surface_area_unchecked(n))
}

pub(crate) fn surface_area_unchecked(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// The kernel profile `Φ_α(s) = −s^{−α}/α`, or `log s` when `α = 0`.
pub fn phi_kernel(spec: &PotentialSpec, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return domain(format!("phi_kernel needs s > 0, got {s}"));
    }
    Ok(phi_alpha(spec.alpha, s))
}

pub(crate) fn phi_alpha(alpha: f64, s: f64) -> f64 {
    if alpha == 0.0 {
        s.ln()
    } else {
        -s.powf(-alpha) / alpha
    }
}

/// `|S^{n-2}|`, the prefactor of the polyspherical reduction.
fn angular_prefactor(n: usize) -> f64 {
    surface_area_unchecked(n - 1)
}

/// Integrates `g(d², r − η cos θ) sin^{n−2} θ` over `θ ∈ [0, π]`.
///
/// Breakpoints are placed geometrically at multiples of `|r−η|/√(rη)`, the
/// angular scale on which the integrand varies when the two radii are close.
fn angular_integral(n: usize, r: f64, eta: f64, g: impl Fn(f64, f64) -> f64) -> f64 {
    let diff = r - eta;
    let f = |theta: f64| {
        let s = (0.5 * theta).sin();
        let s2 = s * s;
        let d2 = diff * diff + 4.0 * r * eta * s2;
        let proj = diff + 2.0 * eta * s2;
        g(d2, proj) * theta.sin().powi(n as i32 - 2)
    };
    let scale = diff.abs() / (r * eta).sqrt();
    let mut breaks = vec![0.0];
    let singular = scale == 0.0;
    if singular {
        let mut t = PI * 2f64.powi(-24);
        while t < PI {
            breaks.push(t);
            t *= 2.0;
        }
    } else {
        let mut t = scale;
        while t < PI {
            breaks.push(t);
            t *= 2.0;
        }
    }
    breaks.push(PI);
    angular_prefactor(n) * quadrature::adaptive_panels(&f, &breaks, ANGULAR_TOL, singular)
}

fn check_pair(spec: &PotentialSpec, r: f64, eta: f64) -> Result<()> {
    if !(r > 0.0 && eta > 0.0) || !r.is_finite() || !eta.is_finite() {
        return domain(format!(
            "kernel radii must be positive, got r = {r}, eta = {eta}"
        ));
    }
    if r == eta && spec.alpha >= spec.n as f64 - 2.0 {
        return Err(Error::Singular(format!(
            "kernel is pointwise singular at r = eta = {r} for alpha = {} >= n - 2",
            spec.alpha
        )));
    }
    Ok(())
}

/// Potential kernel `K(r, η)`; exact shell theorem in the Coulomb case.
pub fn kernel_k(spec: &PotentialSpec, r: f64, eta: f64) -> Result<f64> {
    check_pair(spec, r, eta)?;
    Ok(k_raw(spec, r, eta))
}

/// Potential kernel `K(r, η)` by angular quadrature, never using the closed form.
pub fn kernel_k_quadrature(spec: &PotentialSpec, r: f64, eta: f64) -> Result<f64> {
    check_pair(spec, r, eta)?;
    Ok(k_quadrature_raw(spec, r, eta))
}

/// Force kernel `ω(r, η)`; for `α = n − 2` the exact indicator `ω_n 1_{(0,r)}(η)/r^{n−1}`.
pub fn kernel_omega(spec: &PotentialSpec, r: f64, eta: f64) -> Result<f64> {
    check_pair(spec, r, eta)?;
    Ok(omega_raw(spec, r, eta))
}

/// Force kernel `ω(r, η)` by angular quadrature, never using the closed form.
pub fn kernel_omega_quadrature(spec: &PotentialSpec, r: f64, eta: f64) -> Result<f64> {
    check_pair(spec, r, eta)?;
    Ok(omega_quadrature_raw(spec, r, eta))
}

pub(crate) fn k_raw(spec: &PotentialSpec, r: f64, eta: f64) -> f64 {
    if spec.is_coulomb() {
        coulomb_k(spec.n, r, eta)
    } else {
        k_quadrature_raw(spec, r, eta)
    }
}

pub(crate) fn coulomb_k(n: usize, r: f64, eta: f64) -> f64 {
    let m = r.max(eta);
    let w = surface_area_unchecked(n);
    if n == 2 {
        w * m.ln()
    } else {
        -w * m.powi(2 - n as i32) / (n as f64 - 2.0)
    }
}

fn k_quadrature_raw(spec: &PotentialSpec, r: f64, eta: f64) -> f64 {
    let a = spec.alpha;
    if a == 0.0 {
        angular_integral(spec.n, r, eta, |d2, _| 0.5 * d2.ln())
    } else {
        angular_integral(spec.n, r, eta, move |d2, _| -d2.powf(-0.5 * a) / a)
    }
}

pub(crate) fn omega_raw(spec: &PotentialSpec, r: f64, eta: f64) -> f64 {
    if spec.is_coulomb() {
        coulomb_omega(spec.n, r, eta)
    } else {
        omega_quadrature_raw(spec, r, eta)
    }
}

pub(crate) fn coulomb_omega(n: usize, r: f64, eta: f64) -> f64 {
    if eta < r {
        surface_area_unchecked(n) / r.powi(n as i32 - 1)
    } else if eta == r {
        0.5 * surface_area_unchecked(n) / r.powi(n as i32 - 1)
    } else {
        0.0
    }
}

/// Shell average `∫_{S^{n−1}} |r e₁ − η y|^{−p} dσ(y)` for any real `p`, by angular quadrature.
pub(crate) fn shell_power_average(n: usize, p: f64, r: f64, eta: f64) -> f64 {
    angular_integral(n, r, eta, move |d2, _| d2.powf(-0.5 * p))
}

pub(crate) fn omega_quadrature_raw(spec: &PotentialSpec, r: f64, eta: f64) -> f64 {
    let e = -0.5 * (spec.alpha + 2.0);
    angular_integral(spec.n, r, eta, move |d2, proj| proj * d2.powf(e))
}

/// Shape of the kernel bound: `(rη)^{−(α+1)/2}` below the Coulomb exponent,
/// `(rη)^{−(n−1)/2}|r−η|^{n−2−α}` above it and the exact indicator value at it.
pub fn omega_bound_shape(spec: &PotentialSpec, r: f64, eta: f64) -> f64 {
    let n = spec.n as f64;
    let a = spec.alpha;
    if spec.is_coulomb() {
        coulomb_omega(spec.n, r, eta).max(f64::MIN_POSITIVE)
    } else if a < n - 2.0 {
        (r * eta).powf(-0.5 * (a + 1.0))
    } else {
        (r * eta).powf(-0.5 * (n - 1.0)) * (r - eta).abs().powf(n - 2.0 - a)
    }
}

fn check_density(rho: &RadialField) -> Result<()> {
    if rho.values().iter().any(|&v| v < 0.0) {
        return domain("density samples must be nonnegative");
    }
    Ok(())
}

/// Interaction potential `Φ_α ∗ ρ` sampled on the density's grid.
pub fn potential(spec: &PotentialSpec, rho: &RadialField) -> Result<RadialField> {
    check_density(rho)?;
    let m = KernelMatrix::eulerian(spec, rho.grid(), KernelKind::Potential);
    rho.with_values(m.apply(rho.values()))
}

/// Radial derivative `(Φ_α ∗ ρ)_r` sampled on the density's grid.
pub fn potential_derivative(spec: &PotentialSpec, rho: &RadialField) -> Result<RadialField> {
    check_density(rho)?;
    let m = KernelMatrix::eulerian(spec, rho.grid(), KernelKind::Force);
    rho.with_values(m.apply(rho.values()))
}

/// Radial derivative computed through the angular quadrature of `ω` even when a
/// closed form exists; used to cross-check the Coulomb identity.
pub fn potential_derivative_quadrature(
    spec: &PotentialSpec,
    rho: &RadialField,
) -> Result<RadialField> {
    check_density(rho)?;
    let m = KernelMatrix::eulerian(spec, rho.grid(), KernelKind::ForceQuadrature);
    rho.with_values(m.apply(rho.values()))
}

/// Local Newtonian field `ω_n r^{1−n} ∫_{r_0}^r ρ η^{n−1} dη` of the piecewise linear density.
pub fn coulomb_local_derivative(n: usize, rho: &RadialField) -> RadialField {
    let nodes = rho.grid().nodes();
    let v = rho.values();
    let w = surface_area_unchecked(n);
    let deg = (n / 2 + 2).max(4);
    let mut acc = 0.0;
    let mut out = vec![0.0; nodes.len()];
    for i in 1..nodes.len() {
        let (a, b) = (nodes[i - 1], nodes[i]);
        let (fa, fb) = (v[i - 1], v[i]);
        acc += quadrature::fixed(deg, a, b, |s| {
            let t = (s - a) / (b - a);
            (fa * (1.0 - t) + fb * t) * s.powi(n as i32 - 1)
        });
        out[i] = w * acc / b.powi(n as i32 - 1);
    }
    RadialField::new(rho.grid().clone(), out).expect("same grid")
}

/// Weight `k_α(s)`: `s^{−α/2}` for `α ∈ (−1, 0)` and `log s` for `α = 0`.
pub fn k_alpha(alpha: f64, s: f64) -> f64 {
    if alpha == 0.0 {
        s.ln()
    } else {
        s.powf(-0.5 * alpha)
    }
}

/// Moment `ω_n ∫ ρ(r) k_α(1 + r²) r^{n−1} dr`, defined for `α ∈ (−1, 0]`.
pub fn moment_kalpha(spec: &PotentialSpec, rho: &RadialField) -> Result<f64> {
    if spec.alpha > 0.0 {
        return domain("the k_alpha moment is only defined for alpha in (-1, 0]");
    }
    let weighted = rho
        .grid()
        .nodes()
        .iter()
        .zip(rho.values())
        .map(|(&r, &v)| v * k_alpha(spec.alpha, 1.0 + r * r));
    let field = rho.with_values(weighted.collect())?;
    Ok(field.space_integral(spec.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;

    fn spec(n: usize, alpha: f64) -> PotentialSpec {
        PotentialSpec::new(n, alpha, 1.0, 2.0).unwrap()
    }

    #[test]
    fn surface_areas() {
        assert!((surface_area(2).unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!((surface_area(3).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!((surface_area(4).unwrap() - 2.0 * PI * PI).abs() < 1e-12);
        assert!(surface_area(0).is_err());
    }

    #[test]
    fn kernel_profile_values() {
        assert_eq!(phi_kernel(&spec(3, 1.0), 2.0).unwrap(), -0.5);
        assert_eq!(phi_kernel(&spec(3, 0.0), 1.0).unwrap(), 0.0);
        assert!(phi_kernel(&spec(3, 1.0), 0.0).is_err());
        let s = spec(3, 1e-4);
        let v = phi_kernel(&s, 2.0).unwrap() + 1.0 / s.alpha;
        assert!((v - 2f64.ln()).abs() < 1e-4);
    }

    #[test]
    fn spec_validation() {
        assert!(PotentialSpec::new(1, 0.0, 1.0, 2.0).is_err());
        assert!(PotentialSpec::new(3, 2.0, 1.0, 2.0).is_err());
        assert!(PotentialSpec::new(3, 1.0, 0.5, 2.0).is_err());
        assert!(PotentialSpec::new(3, 1.0, 1.0, 1.0).is_err());
        let s = PotentialSpec::new(3, 1.0, 1.0, 4.0 / 3.0).unwrap();
        assert!((s.a0() - 1.0 / 48.0).abs() < 1e-16);
    }

    #[test]
    fn coulomb_quadrature_reproduces_shell_theorem() {
        for n in [2usize, 3, 4] {
            let s = spec(n, n as f64 - 2.0);
            for &(r, eta) in &[(2.0, 1.0), (1.0, 2.0), (0.3, 0.31), (5.0, 0.2)] {
                let q = kernel_omega_quadrature(&s, r, eta).unwrap();
                let exact = coulomb_omega(n, r, eta);
                let scale = surface_area_unchecked(n) / r.powi(n as i32 - 1);
                assert!(
                    (q - exact).abs() < 1e-10 * scale,
                    "n={n} r={r} eta={eta}: {q} vs {exact}"
                );
                let kq = kernel_k_quadrature(&s, r, eta).unwrap();
                let ke = coulomb_k(n, r, eta);
                assert!(
                    (kq - ke).abs() < 1e-10 * ke.abs().max(1.0),
                    "K n={n}: {kq} vs {ke}"
                );
            }
        }
    }

    #[test]
    fn three_dimensional_newton_values() {
        let s = spec(3, 1.0);
        assert!((kernel_k(&s, 2.0, 1.0).unwrap() + 2.0 * PI).abs() < 1e-13);
        assert!((kernel_omega(&s, 2.0, 1.0).unwrap() - PI).abs() < 1e-13);
        assert_eq!(kernel_omega(&s, 1.0, 2.0).unwrap(), 0.0);
        assert!(matches!(
            kernel_omega(&s, 1.0, 1.0),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn sub_coulomb_kernel_is_finite_on_the_diagonal() {
        let s = spec(3, 0.5);
        let v = kernel_k(&s, 1.0, 1.0).unwrap();
        // Closed form for n = 3: K(r, r) = -(2π/α) ∫_0^π (2r sin(θ/2))^{-α} sin θ dθ.
        let exact = -(2.0 * PI / 0.5) * 2f64.powf(-0.5) * 2.0 * 2.0 / (2.0 - 0.5);
        assert!((v - exact).abs() < 1e-10 * exact.abs(), "{v} vs {exact}");
    }

    #[test]
    fn moment_requires_nonpositive_alpha() {
        let g = RadialGrid::uniform(0.01, 1.0, 10).unwrap();
        let rho = RadialField::zeros(&g);
        assert!(moment_kalpha(&spec(3, 0.5), &rho).is_err());
        assert_eq!(moment_kalpha(&spec(3, 0.0), &rho).unwrap(), 0.0);
    }
}
