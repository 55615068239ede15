use proptest::prelude::*;

use pasym::colehopf::{scaling_exponents, w10};
use pasym::fold::{fold_root, phase_coefficient, FoldQuery};
use pasym::initial_layer::burgers_step;
use pasym::oracle::SampledField;
use pasym::quad::gauss_legendre;
use pasym::specfun::{erfc_half, r000, ScaledValue};
use pasym::verify::{fit_order, RegionSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn erfc_halves_sum_to_one(z in -30.0f64..30.0) {
        prop_assert!((erfc_half(z) + erfc_half(-z) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn r000_interpolates_between_states(z in -50.0f64..50.0, a in -3.0f64..3.0, jump in 0.01f64..4.0) {
        let (minus, plus) = (a + jump, a);
        let v = r000(z, minus, plus);
        prop_assert!(v >= plus - 1e-14 && v <= minus + 1e-14);
        prop_assert!(r000(z + 0.1, minus, plus) <= v + 1e-15);
    }

    #[test]
    fn fold_root_is_a_maximizing_root(xi in -5.0f64..5.0, tau in -6.0f64..6.0, n in 1u32..4) {
        let r = fold_root(&FoldQuery::new(xi, tau, n).unwrap());
        prop_assert_eq!(r.all_real_roots.len() % 2, 1);
        let a = phase_coefficient(n);
        let phase = |u: f64| { let s = 0.5 * u; -a * s.powi(2 * n as i32 + 2) + tau * s * s - xi * s };
        for &u in &r.all_real_roots {
            let res = u.powi(2 * n as i32 + 1) - tau * u + xi;
            prop_assert!(res.abs() < 1e-9 * (1.0 + u.abs().powi(2 * n as i32 + 1)));
            prop_assert!(phase(u) <= phase(r.root) + 1e-12 * (1.0 + phase(r.root).abs()));
        }
    }

    #[test]
    fn w10_is_odd_in_xi(xi in 0.0f64..4.0, tau in -8.0f64..30.0) {
        let a = w10(xi, tau, 1.0).unwrap();
        let b = w10(-xi, tau, 1.0).unwrap();
        prop_assert!((a + b).abs() <= 1e-12 * a.abs().max(1.0));
        prop_assert!(a <= 1e-12);
    }

    #[test]
    fn exponent_balance(n in 1u32..=200) {
        prop_assert!(scaling_exponents(n).unwrap().balance_holds());
    }

    #[test]
    fn burgers_step_is_monotone_and_bounded(eta in -50.0f64..50.0, theta in 1e-3f64..100.0, vp in -2.0f64..1.0, jump in 0.1f64..3.0) {
        let vm = vp + jump;
        let v = burgers_step(eta, theta, vm, vp);
        prop_assert!(v >= vp - 1e-12 && v <= vm + 1e-12);
        prop_assert!(burgers_step(eta + 0.05, theta, vm, vp) <= v + 1e-12);
    }

    #[test]
    fn scaled_ratios_ignore_common_scale(s in -1e5f64..1e5, a in 0.1f64..10.0, b in 0.1f64..10.0) {
        let x = ScaledValue::new(s, a);
        let y = ScaledValue::new(s + 2.0, b);
        prop_assert!((x.ratio(&y) - a / b * (-2.0f64).exp()).abs() <= 1e-12 * a / b);
    }

    #[test]
    fn gauss_legendre_is_exact_for_low_degree(n in 2usize..30, k in 0usize..8) {
        let k = k.min(2 * n - 1);
        let (x, w) = gauss_legendre(n);
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
        let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
        prop_assert!((q - exact).abs() < 1e-13);
    }

    #[test]
    fn bilinear_data_interpolates_exactly(x in 0.0f64..1.0, t in 0.0f64..2.0, c in -3.0f64..3.0) {
        let f = SampledField::from_fn(vec![0.0, 0.3, 0.7, 1.0], vec![0.0, 1.5, 2.0], |x, t| c + 2.0 * x - t + x * t).unwrap();
        let v = f.interpolate(x, t).unwrap();
        prop_assert!((v - (c + 2.0 * x - t + x * t)).abs() < 1e-13);
        prop_assert!(f.interpolate(x + 1.5, t).is_none());
    }

    #[test]
    fn fit_order_recovers_power_laws(slope in -2.0f64..2.0, c in 0.01f64..100.0) {
        let entries: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3, 1e-4].iter().map(|&e: &f64| (e, c * e.powf(slope))).collect();
        let fit = fit_order(&entries).unwrap();
        prop_assert!((fit.slope - slope).abs() < 1e-12);
    }

    #[test]
    fn omega_eps_boundary_is_the_level_set(eps in 1e-8f64..0.5, n in 1u32..5, k in 0.1f64..5.0) {
        let mut region = RegionSpec::omega_eps(n);
        region.k = k;
        let ex = scaling_exponents(n).unwrap();
        for (x, t) in region.boundary_points(eps, 16).unwrap() {
            let lhs = (x * eps.powf(-ex.kappa_f64())).abs() + t.abs();
            let rhs = k * eps.powf(ex.mu_f64());
            prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs);
        }
    }
}
