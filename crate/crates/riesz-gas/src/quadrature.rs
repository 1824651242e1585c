//! Gauss-Legendre rules and an adaptive bisection integrator.
//!
//! The adaptive driver compares a fixed Gauss-Legendre rule on a panel with the
//! same rule applied to both halves and bisects until the two agree. Endpoint
//! power singularities are tamed by an algebraic change of variables.

use gauss_quad::GaussLegendre;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Default node count of the panel rule used by [`adaptive`].
pub const PANEL_NODES: usize = 10;
/// Absolute tolerances are never tightened below this multiple of the rounding level.
const ROUNDOFF_GUARD: f64 = 64.0;
/// Maximum bisection depth of the adaptive driver.
pub const MAX_DEPTH: usize = 20;

/// Returns the `deg`-point Gauss-Legendre rule on `[-1, 1]` as `(node, weight)` pairs.
///
/// Rules are computed once per degree and shared for the lifetime of the process.
pub fn gauss_legendre(deg: usize) -> &'static [(f64, f64)] {
    type Table = HashMap<usize, &'static [(f64, f64)]>;
    const CACHED: usize = 129;
    static RULES: [OnceLock<Vec<(f64, f64)>>; CACHED] = [const { OnceLock::new() }; CACHED];
    static OTHERS: OnceLock<Mutex<Table>> = OnceLock::new();
    if deg < CACHED {
        return RULES[deg].get_or_init(|| build_rule(deg));
    }
    let table = OTHERS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = table.lock().expect("quadrature rule cache poisoned");
    guard
        .entry(deg)
        .or_insert_with(|| Box::leak(build_rule(deg).into_boxed_slice()))
}

fn build_rule(deg: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(deg.max(2)).expect("Gauss-Legendre degree >= 2");
    let mut pairs: Vec<(f64, f64)> = rule.into_node_weight_pairs();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Applies the `deg`-point Gauss-Legendre rule to `f` on `[a, b]`.
pub fn fixed<F: FnMut(f64) -> f64>(deg: usize, a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre(deg)
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Like [`fixed`] but also returns the rule applied to `|f|`.
pub fn fixed_with_abs<F: FnMut(f64) -> f64>(deg: usize, a: f64, b: f64, mut f: F) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let (s, sa) = gauss_legendre(deg)
        .iter()
        .fold((0.0, 0.0), |(s, sa), &(x, w)| {
            let v = w * f(mid + half * x);
            (s + v, sa + v.abs())
        });
    (s * half, sa * half.abs())
}

/// Integrates `f` on `[a, b]` to absolute tolerance `tol_abs` by panel bisection.
///
/// Returns the integral and the accumulated error estimate.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol_abs: f64) -> (f64, f64) {
    let whole = fixed(PANEL_NODES, a, b, f);
    bisect(f, a, b, whole, tol_abs, 0)
}

fn bisect<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let left = fixed(PANEL_NODES, a, m, f);
    let right = fixed(PANEL_NODES, m, b, f);
    let refined = left + right;
    let err = (refined - whole).abs();
    if err <= tol || depth >= MAX_DEPTH || !err.is_finite() {
        return (refined, err);
    }
    let t = tol * std::f64::consts::FRAC_1_SQRT_2;
    let (l, el) = bisect(f, a, m, left, t, depth + 1);
    let (r, er) = bisect(f, m, b, right, t, depth + 1);
    (l + r, el + er)
}

/// Integrates `f` over consecutive panels delimited by `breaks` to relative tolerance `tol_rel`.
///
/// The absolute tolerance handed to each panel is `tol_rel` times the coarse
/// estimate of `∫|f|`, which keeps cancelling integrands well conditioned.
/// When `singular_left` is set the first panel is mapped by `x = a + (b - a) t^4`
/// so that an integrable power singularity at `breaks[0]` becomes smooth.
pub fn adaptive_panels<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    tol_rel: f64,
    singular_left: bool,
) -> f64 {
    let npan = breaks.len().saturating_sub(1);
    if npan == 0 {
        return 0.0;
    }
    let panel_fn = |k: usize| -> Box<dyn Fn(f64) -> f64 + '_> {
        let (a, b) = (breaks[k], breaks[k + 1]);
        if k == 0 && singular_left {
            Box::new(move |t: f64| {
                let t3 = t * t * t;
                f(a + (b - a) * t3 * t) * 4.0 * (b - a) * t3
            })
        } else {
            Box::new(move |x: f64| f(x))
        }
    };
    let span = |k: usize| -> (f64, f64) {
        if k == 0 && singular_left {
            (0.0, 1.0)
        } else {
            (breaks[k], breaks[k + 1])
        }
    };
    let coarse: Vec<(f64, f64)> = (0..npan)
        .map(|k| {
            let (a, b) = span(k);
            fixed_with_abs(PANEL_NODES, a, b, panel_fn(k))
        })
        .collect();
    let scale: f64 = coarse.iter().map(|v| v.1).sum();
    if scale == 0.0 || !scale.is_finite() {
        return coarse.iter().map(|v| v.0).sum();
    }
    let tol = (tol_rel * scale / npan as f64).max(ROUNDOFF_GUARD * f64::EPSILON * scale);
    (0..npan)
        .map(|k| {
            let (a, b) = span(k);
            let g = panel_fn(k);
            bisect(&g, a, b, coarse[k].0, tol, 0).0
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let v = fixed(8, 0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-9);
    }

    #[test]
    fn legendre_weights_sum_to_two() {
        for deg in [4, 10, 64] {
            let s: f64 = gauss_legendre(deg).iter().map(|p| p.1).sum();
            assert!((s - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn adaptive_resolves_sharp_peak() {
        let f = |x: f64| 1.0 / (1e-4 + x * x);
        let (v, _) = adaptive(&f, -1.0, 1.0, 1e-10);
        let exact = 2.0 * (1.0 / 1e-2f64).atan() / 1e-2;
        assert!((v - exact).abs() / exact < 1e-9);
    }

    #[test]
    fn singular_left_panel_handles_inverse_square_root() {
        let f = |x: f64| x.powf(-0.5);
        let v = adaptive_panels(&f, &[0.0, 0.5, 1.0], 1e-12, true);
        assert!((v - 2.0).abs() < 1e-10);
    }
}
