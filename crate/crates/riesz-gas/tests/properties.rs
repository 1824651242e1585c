//! Property tests of invariants across the public API.

use proptest::prelude::*;
use riesz_gas::config::Config;
use riesz_gas::io::fmt_f64;
use riesz_gas::nsr_solver::FluidState;
use riesz_gas::radial_kernel::{kernel_k, kernel_omega, PotentialSpec};
use riesz_gas::stability_experiments::{perturb, PerturbationMode};
use riesz_gas::{RadialField, RadialGrid};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn potential_kernel_is_symmetric(n in 2usize..5, frac in 0.05f64..0.95, r in 0.05f64..3.0, eta in 0.05f64..3.0) {
        let alpha = frac * (n as f64 - 1.0);
        let spec = PotentialSpec::new(n, alpha, 1.0, 2.0).unwrap();
        prop_assume!((r - eta).abs() > 1e-3);
        let (a, b) = (kernel_k(&spec, r, eta).unwrap(), kernel_k(&spec, eta, r).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(b.abs()));
    }

    #[test]
    fn newtonian_force_kernel_is_an_indicator(n in 2usize..6, r in 0.05f64..3.0, eta in 0.05f64..3.0) {
        prop_assume!((r - eta).abs() > 1e-9);
        let spec = PotentialSpec::new(n, n as f64 - 2.0, 1.0, 2.0).unwrap();
        let w = kernel_omega(&spec, r, eta).unwrap();
        if eta > r {
            prop_assert_eq!(w, 0.0);
        } else {
            prop_assert!(w > 0.0);
        }
    }

    #[test]
    fn formatted_floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let s = fmt_f64(x);
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn canonical_config_is_a_fixed_point(n in 2usize..9, alpha in 0.0f64..1.0, amps in proptest::collection::vec(0.0f64..1.0, 1..4)) {
        let list: Vec<String> = amps.iter().map(|a| a.to_string()).collect();
        let text = format!("amplitudes = {}\nalpha = {alpha}\n# comment\nn = {n}\n", list.join(", "));
        let c = Config::parse(&text).unwrap();
        let again = Config::parse(&c.canonical()).unwrap();
        prop_assert_eq!(&c, &again);
        prop_assert_eq!(again.get_list::<f64>("amplitudes").unwrap().unwrap(), amps);
    }

    #[test]
    fn density_perturbations_keep_the_mass(amp in 0.0f64..0.3, squeeze in proptest::bool::ANY) {
        let grid = RadialGrid::uniform(1e-6, 1.0, 101).unwrap();
        let rho = RadialField::from_fn(&grid, |r| (1.0 - 4.0 * r * r).max(0.0)).unwrap();
        let mode = if squeeze { PerturbationMode::Squeeze } else { PerturbationMode::Bump };
        let (p, m) = perturb(3, &rho, mode, amp).unwrap();
        let (a, b) = (p.space_integral(3), rho.space_integral(3));
        prop_assert!((a - b).abs() <= 1e-12 * b);
        prop_assert!(p.values().iter().all(|&v| v >= 0.0));
        prop_assert!(m.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn lagrangian_mass_coordinates_are_consistent(width in 0.3f64..2.0, cells in 8usize..64, blend in 0.0f64..1.0) {
        let s = FluidState::from_profile(3, &|r: f64| (-(r / width).powi(2)).exp(), &|r: f64| 0.1 * r, 0.05, 3.0, cells, blend).unwrap();
        let x = s.mass_coordinates();
        let total = s.x[cells];
        for (a, b) in x.iter().zip(&s.x) {
            prop_assert!((a - b).abs() <= 1e-13 * total);
        }
        prop_assert!((s.eulerian_mass() - s.mass()).abs() <= 1e-13 * s.mass());
        prop_assert_eq!(s.u[0], 0.0);
    }
}
