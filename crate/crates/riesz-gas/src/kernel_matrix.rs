//! Product-integration matrices for the radial potential and force.
//!
//! Row `i` of a matrix holds the weights that map density samples to the
//! potential (or its radial derivative) at the `i`-th evaluation radius. Two
//! density representations are supported: piecewise linear on a grid
//! ([`KernelMatrix::eulerian`]) and piecewise constant on cells
//! ([`KernelMatrix::cells`]). Panels touching the evaluation radius are refined
//! geometrically toward it because the kernels behave like `|r−η|^{n−2−α}` there.

use crate::grid::RadialGrid;
use crate::quadrature;
use crate::radial_kernel::{
    coulomb_k, coulomb_omega, k_raw, omega_quadrature_raw, omega_raw, PotentialSpec,
};
use rayon::prelude::*;

/// Which kernel a matrix integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `K(r, η)`, giving `Φ_α ∗ ρ`.
    Potential,
    /// `ω(r, η)`, giving `(Φ_α ∗ ρ)_r`; closed form in the Coulomb case.
    Force,
    /// `ω(r, η)` through angular quadrature even in the Coulomb case.
    ForceQuadrature,
}

/// Number of geometric refinement levels toward a singular panel end.
const GRADING_LEVELS: i32 = 12;
/// Gauss-Legendre order on regular panels.
const FAR_NODES: usize = 8;
/// Gauss-Legendre order on panels within two widths of the evaluation radius.
const NEAR_NODES: usize = 16;

/// Dense row-major weight matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl KernelMatrix {
    /// Square matrix acting on piecewise linear densities sampled at the grid nodes,
    /// evaluating at the same nodes.
    pub fn eulerian(spec: &PotentialSpec, grid: &RadialGrid, kind: KernelKind) -> Self {
        let nodes = grid.nodes();
        let n = nodes.len();
        let data: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let r = nodes[i];
                let mut row = vec![0.0; n];
                for k in 0..n - 1 {
                    let (l, rr) = panel_moments(spec, kind, r, nodes[k], nodes[k + 1]);
                    row[k] += l;
                    row[k + 1] += rr;
                }
                row
            })
            .collect();
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Matrix acting on cell-constant densities over `edges`, evaluated at `points`.
    pub fn cells(spec: &PotentialSpec, points: &[f64], edges: &[f64], kind: KernelKind) -> Self {
        let cols = edges.len() - 1;
        let data: Vec<f64> = points
            .par_iter()
            .flat_map_iter(|&r| {
                (0..cols).map(move |c| {
                    let (l, rr) = panel_moments(spec, kind, r, edges[c], edges[c + 1]);
                    l + rr
                })
            })
            .collect();
        Self {
            rows: points.len(),
            cols,
            data,
        }
    }

    /// Number of evaluation radii.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of density degrees of freedom.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "kernel matrix column mismatch");
        self.data
            .chunks(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// `∫_a^b k(r, η) {(b−η)/h, (η−a)/h} η^{n−1} dη` for the requested kernel.
pub(crate) fn panel_moments(
    spec: &PotentialSpec,
    kind: KernelKind,
    r: f64,
    a: f64,
    b: f64,
) -> (f64, f64) {
    let n = spec.n;
    let h = b - a;
    let closed = spec.is_coulomb() && kind != KernelKind::ForceQuadrature;
    let kernel = |eta: f64| -> f64 {
        if eta == r {
            return 0.0;
        }
        match (kind, closed) {
            (KernelKind::Potential, true) => coulomb_k(n, r, eta),
            (KernelKind::Potential, false) => k_raw(spec, r, eta),
            (KernelKind::Force, true) => coulomb_omega(n, r, eta),
            (KernelKind::Force, false) => omega_raw(spec, r, eta),
            (KernelKind::ForceQuadrature, _) => omega_quadrature_raw(spec, r, eta),
        }
    };
    let moment = |lo: f64, hi: f64, deg: usize| -> (f64, f64) {
        let mut l = 0.0;
        let mut rr = 0.0;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for &(x, w) in quadrature::gauss_legendre(deg) {
            let eta = mid + half * x;
            let base = w * half * kernel(eta) * eta.powi(n as i32 - 1);
            l += base * (b - eta) / h;
            rr += base * (eta - a) / h;
        }
        (l, rr)
    };
    if closed {
        return if r > a && r < b {
            add(moment(a, r, FAR_NODES), moment(r, b, FAR_NODES))
        } else {
            moment(a, b, FAR_NODES)
        };
    }
    if r > a && r < b {
        let left = graded(&moment, kernel_weight(&kernel, n, a, b), r, a);
        let right = graded(&moment, kernel_weight(&kernel, n, a, b), r, b);
        return add(left, right);
    }
    if r == a || r == b {
        let far = if r == a { b } else { a };
        return graded(&moment, kernel_weight(&kernel, n, a, b), r, far);
    }
    let dist = if r < a { a - r } else { r - b };
    if dist >= 2.0 * h {
        moment(a, b, FAR_NODES)
    } else if dist >= 0.5 * h {
        moment(a, b, NEAR_NODES)
    } else {
        let nsub = 4;
        (0..nsub).fold((0.0, 0.0), |acc, s| {
            let lo = a + h * s as f64 / nsub as f64;
            let hi = a + h * (s + 1) as f64 / nsub as f64;
            add(acc, moment(lo, hi, NEAR_NODES))
        })
    }
}

fn add(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    (x.0 + y.0, x.1 + y.1)
}

/// Kernel times radial weight, used on the innermost graded panel.
fn kernel_weight<'k>(
    kernel: &'k impl Fn(f64) -> f64,
    n: usize,
    a: f64,
    b: f64,
) -> impl Fn(f64) -> (f64, f64) + 'k {
    let h = b - a;
    move |eta: f64| {
        let base = kernel(eta) * eta.powi(n as i32 - 1);
        (base * (b - eta) / h, base * (eta - a) / h)
    }
}

/// Integrates from the singular point `s` to `far`, refining geometrically toward `s`.
fn graded(
    moment: &impl Fn(f64, f64, usize) -> (f64, f64),
    weight: impl Fn(f64) -> (f64, f64),
    s: f64,
    far: f64,
) -> (f64, f64) {
    let len = far - s;
    let mut acc = (0.0, 0.0);
    for j in 0..GRADING_LEVELS {
        let t0 = 2f64.powi(-(j + 1));
        let t1 = 2f64.powi(-j);
        let (lo, hi) = ordered(s + len * t0, s + len * t1);
        acc = add(acc, moment(lo, hi, FAR_NODES));
    }
    let inner = len * 2f64.powi(-GRADING_LEVELS);
    for &(x, w) in quadrature::gauss_legendre(FAR_NODES) {
        let t = 0.5 * (x + 1.0);
        let t3 = t * t * t;
        let eta = s + inner * t3 * t;
        let jac = 0.5 * w * 4.0 * inner.abs() * t3;
        let (l, r) = weight(eta);
        acc.0 += jac * l;
        acc.1 += jac * r;
    }
    acc
}

fn ordered(x: f64, y: f64) -> (f64, f64) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}
