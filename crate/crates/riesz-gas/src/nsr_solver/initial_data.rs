//! Approximate initial data on the annulus `[1/b, b]`: mollified square-root
//! density lifted away from vacuum, an outer boundary layer with prescribed
//! density, and a velocity that makes the outer edge stress-free.

use super::state::{blended_edges, cell_masses, FluidState, CELL_NODES};
use crate::error::{domain, Result};
use crate::grid::RadialField;
use crate::quadrature::{self, gauss_legendre};
use crate::radial_kernel::{surface_area_unchecked, PotentialSpec};

/// Nodes of the radial part of the mollification.
const MOLLIFIER_RADIAL_NODES: usize = 24;
/// Nodes of the angular part of the mollification.
const MOLLIFIER_ANGULAR_NODES: usize = 32;
/// Samples of the tabulated mollified profile.
const TABLE_POINTS: usize = 8192;
/// Weight of equal-mass positions when placing the initial edges.
const EDGE_BLEND: f64 = 0.5;

/// Smooth monotone step: `0` for `z ≤ 0`, `1` for `z ≥ 1`.
pub fn cutoff(z: f64) -> f64 {
    let h = |z: f64| if z > 0.0 { (-1.0 / z).exp() } else { 0.0 };
    let (a, b) = (h(z), h(1.0 - z));
    if a + b == 0.0 {
        if z >= 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        a / (a + b)
    }
}

/// Exponent `β = min(1/2, (1 − 1/γ) n)` of the outer boundary density `b^{−(n−β)}`.
pub fn boundary_beta(spec: &PotentialSpec) -> f64 {
    0.5f64.min((1.0 - 1.0 / spec.gamma) * spec.n as f64)
}

/// Radial mollification `(f ∗ J_δ)(r)` with the standard bump
/// `J(y) ∝ exp(1/(|y|² − 1))`, by tensor Gauss-Legendre quadrature in the
/// distance `s = |y|` and the angle between `y` and the evaluation point.
pub fn mollify(n: usize, f: &dyn Fn(f64) -> f64, delta: f64, r: f64) -> f64 {
    let srule = gauss_legendre(MOLLIFIER_RADIAL_NODES);
    let trule = gauss_legendre(MOLLIFIER_ANGULAR_NODES);
    let half_pi = 0.5 * std::f64::consts::PI;
    let (mut num, mut den) = (0.0, 0.0);
    for &(xs, ws) in srule {
        let s = 0.5 * delta * (xs + 1.0);
        let z = s / delta;
        let bump = (1.0 / (z * z - 1.0)).exp() * s.powi(n as i32 - 1) * ws;
        let (mut avg, mut wsum) = (0.0, 0.0);
        for &(xt, wt) in trule {
            let th = half_pi * (xt + 1.0);
            let w = wt * th.sin().powi(n as i32 - 2);
            let d = (r * r + s * s - 2.0 * r * s * th.cos()).max(0.0).sqrt();
            avg += w * f(d);
            wsum += w;
        }
        num += bump * avg / wsum;
        den += bump;
    }
    num / den
}

/// Piecewise linear table of a function on `[0, end]`, zero beyond.
struct Table {
    h: f64,
    values: Vec<f64>,
}

impl Table {
    fn new(end: f64, f: impl Fn(f64) -> f64) -> Self {
        let h = end / (TABLE_POINTS - 1) as f64;
        Self {
            h,
            values: (0..TABLE_POINTS).map(|k| f(h * k as f64)).collect(),
        }
    }

    fn eval(&self, r: f64) -> f64 {
        let t = r / self.h;
        if t >= (TABLE_POINTS - 1) as f64 {
            return 0.0;
        }
        let k = t.floor() as usize;
        let frac = t - k as f64;
        self.values[k] * (1.0 - frac) + self.values[k + 1] * frac
    }
}

/// Builds the approximate initial state for data `(ρ₀, m₀ = ρ₀u₀)` with viscosity
/// `epsilon`, outer radius `b` and `cells` mass cells.
///
/// The interior part `√ρ₀ ∗ J_{√ε} + ε e^{−r²}` is blended with the constant
/// `b^{−(n−β)/2}` through `S(2(r − (b−1)))`, squared, and its interior part scaled
/// so that the annulus carries exactly the mass of `ρ₀`; the boundary value
/// `ρ(b) = b^{−(n−β)}` is left untouched by the scaling. The velocity is the
/// mollified `√ρ₀ u₀ 1_{[4/b, b−2]}` divided by `√ρ`, corrected near the edge by
/// `−(1/ε) S(4(r − (b − ½))) r^{1−n} ∫_r^b p/ρ z^{n−1} dz` evaluated with the discrete
/// cell pressures, which makes the outer cells stress-free.
pub fn build_initial_data(
    spec: &PotentialSpec,
    rho0: &RadialField,
    m0: &RadialField,
    epsilon: f64,
    b: f64,
    cells: usize,
) -> Result<FluidState> {
    let n = spec.n;
    if !(epsilon > 0.0) || !(b > 1.0) || cells < 16 {
        return domain("initial data need epsilon > 0, b > 1 and at least 16 cells");
    }
    if rho0.grid() != m0.grid() {
        return domain("initial density and momentum must share a grid");
    }
    if rho0.values().iter().any(|&v| v < 0.0) {
        return domain("initial density must be nonnegative");
    }
    let mass = rho0.space_integral(n);
    if !(mass > 0.0) {
        return domain(format!("initial mass must be positive, got {mass}"));
    }
    let omega = surface_area_unchecked(n);
    let delta = epsilon.sqrt();
    let outer = rho0.grid().last() + delta;
    let table_end = outer.max(b) + 1.0;
    let sqrt0 = |r: f64| rho0.eval(r).max(0.0).sqrt();
    let moll = Table::new(table_end, |r| {
        if r <= outer {
            mollify(n, &sqrt0, delta, r)
        } else {
            0.0
        }
    });
    let interior = |r: f64| moll.eval(r) + epsilon * (-r * r).exp();

    let full_space = {
        let end = table_end + 8.0;
        let panels = 512;
        let h = end / panels as f64;
        (0..panels)
            .map(|k| {
                quadrature::fixed(CELL_NODES, h * k as f64, h * (k + 1) as f64, |r| {
                    interior(r).powi(2) * r.powi(n as i32 - 1)
                })
            })
            .sum::<f64>()
    };
    let scale0 = (mass / (omega * full_space)).sqrt();

    let beta = boundary_beta(spec);
    let edge_amp = b.powf(-0.5 * (n as f64 - beta));
    let s_rho = |r: f64| cutoff(2.0 * (r - (b - 1.0)));
    let profile =
        |c: f64| move |r: f64| (c * interior(r) * (1.0 - s_rho(r)) + edge_amp * s_rho(r)).powi(2);
    let inner = 1.0 / b;
    let edges = blended_edges(n, &profile(scale0), inner, b, cells, EDGE_BLEND)?;

    let qa = cell_masses(n, &|r| (interior(r) * (1.0 - s_rho(r))).powi(2), &edges);
    let qb = cell_masses(
        n,
        &|r| 2.0 * interior(r) * (1.0 - s_rho(r)) * edge_amp * s_rho(r),
        &edges,
    );
    let qc = cell_masses(n, &|r| (edge_amp * s_rho(r)).powi(2), &edges);
    let (sa, sb, sc): (f64, f64, f64) = (qa.iter().sum(), qb.iter().sum(), qc.iter().sum());
    let target = mass / omega;
    if sc >= target {
        return domain(format!(
            "the boundary layer alone carries mass {} >= {mass}; increase b",
            omega * sc
        ));
    }
    let c = (-sb + (sb * sb + 4.0 * sa * (target - sc)).sqrt()) / (2.0 * sa);
    let dx: Vec<f64> = (0..cells)
        .map(|k| c * c * qa[k] + c * qb[k] + qc[k])
        .collect();
    let rho_fn = profile(c);

    let has_momentum = m0.values().iter().any(|&v| v != 0.0);
    let u_tilde: Vec<f64> = if has_momentum {
        let w = |r: f64| {
            if r < 4.0 / b || r > b - 2.0 {
                return 0.0;
            }
            let rho = rho0.eval(r);
            if rho > 0.0 {
                m0.eval(r) / rho.sqrt()
            } else {
                0.0
            }
        };
        edges
            .iter()
            .map(|&r| mollify(n, &w, 1.0 / b, r) / rho_fn(r).sqrt())
            .collect()
    } else {
        vec![0.0; edges.len()]
    };

    let state = FluidState::new(n, edges, dx, vec![0.0; cells + 1], 0.0)?;
    let mut tail = vec![0.0; cells + 1];
    for k in (0..cells).rev() {
        let rho = state.rho[k];
        tail[k] = tail[k + 1] + spec.pressure(rho) * state.dx[k] / (rho * rho);
    }
    let u: Vec<f64> = (0..=cells)
        .map(|i| {
            let r = state.r[i];
            u_tilde[i] - cutoff(4.0 * (r - (b - 0.5))) * tail[i] / (epsilon * r.powi(n as i32 - 1))
        })
        .collect();
    let mut u = u;
    u[0] = 0.0;
    Ok(FluidState { u, ..state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;

    #[test]
    fn cutoff_is_a_monotone_step() {
        assert_eq!(cutoff(-0.5), 0.0);
        assert_eq!(cutoff(0.0), 0.0);
        assert_eq!(cutoff(1.0), 1.0);
        assert_eq!(cutoff(3.0), 1.0);
        assert!((cutoff(0.5) - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for k in 1..100 {
            let v = cutoff(k as f64 / 100.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn mollifier_preserves_constants() {
        for n in [2, 3] {
            let v = mollify(n, &|_| 2.5, 0.3, 1.0);
            assert!((v - 2.5).abs() < 1e-13);
        }
    }

    #[test]
    fn contract_of_the_initial_state() {
        let spec = PotentialSpec::new(3, 1.0, 1.0, 2.0).unwrap();
        let g = RadialGrid::uniform(1e-6, 1.0, 201).unwrap();
        let rho0 = RadialField::from_fn(&g, |r| 5.0 * (1.0 - r * r)).unwrap();
        let m0 = RadialField::zeros(&g);
        let s = build_initial_data(&spec, &rho0, &m0, 1e-2, 3.0, 64).unwrap();
        let mass = rho0.space_integral(3);
        assert!((s.mass() - mass).abs() < 1e-12 * mass);
        assert!(s.min_rho() > 0.0);
        let edge = 3f64.powf(-2.5);
        assert!((s.rho[63] - edge).abs() < 1e-12 * edge);
        assert_eq!(s.u[0], 0.0);
        let stress = crate::nsr_solver::diagnostics(&spec, 1e-2, &s).boundary_pressure;
        assert!(stress.abs() < 1e-8, "{stress}");
    }
}
