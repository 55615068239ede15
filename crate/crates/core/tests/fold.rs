use pasym::colehopf::w10;
use pasym::fold::{fold_root, outer_leading, phase_coefficient, FoldQuery};

/// Global maximizer of `-a s^{2n+2} + τ s² - ξ s` by dense sampling, then
/// bisection on the derivative around the best sample.
fn brute_force_argmax(xi: f64, tau: f64, n: u32) -> f64 {
    let a = phase_coefficient(n);
    let k = 2 * n as i32 + 2;
    let p = |s: f64| -a * s.powi(k) + tau * s * s - xi * s;
    let dp = |s: f64| -(k as f64) * a * s.powi(k - 1) + 2.0 * tau * s - xi;
    let reach = 2.0 * (1.0 + tau.abs() + xi.abs());
    let samples = 200_000;
    let h = 2.0 * reach / samples as f64;
    let best = (0..=samples)
        .map(|i| -reach + h * i as f64)
        .max_by(|&u, &v| p(u).total_cmp(&p(v)))
        .unwrap();
    let (mut lo, mut hi) = (best - h, best + h);
    assert!(
        dp(lo) >= 0.0 && dp(hi) <= 0.0,
        "maximizer not bracketed at xi={xi} tau={tau}"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dp(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn fold_root_is_twice_the_phase_argmax() {
    for n in [1, 2] {
        for i in 0..30 {
            for k in 0..30 {
                let xi = -3.0 + 6.0 * (i as f64 + 0.5) / 30.0;
                let tau = -4.0 + 8.0 * (k as f64 + 0.5) / 30.0;
                let root = fold_root(&FoldQuery::new(xi, tau, n).unwrap()).root;
                let brute = 2.0 * brute_force_argmax(xi, tau, n);
                assert!(
                    (root - brute).abs() <= 1e-10 * brute.abs().max(1.0),
                    "n={n} xi={xi} tau={tau}: {root} vs {brute}"
                );
            }
        }
    }
}

#[test]
fn roots_satisfy_the_outer_equation() {
    for (xi, tau) in [(0.3, 2.0), (-1.0, 5.0), (2.0, -1.0), (0.0, 3.0)] {
        let r = fold_root(&FoldQuery::new(xi, tau, 1).unwrap());
        assert_eq!(r.all_real_roots.len() % 2, 1);
        for u in &r.all_real_roots {
            let res: f64 = u.powi(3) - tau * u + xi;
            assert!(res.abs() < 1e-12 * (1.0 + tau.abs() * u.abs() + xi.abs()));
        }
    }
}

#[test]
fn outer_matching_improves_as_tau_decreases() {
    // |φ''w₁,₀ - H| at ξ = 1 for τ → -∞
    let phi2 = 1.0;
    let errors: Vec<f64> = [-5.0, -10.0, -20.0]
        .iter()
        .map(|&tau| {
            let h = outer_leading(&FoldQuery::new(1.0, tau, 1).unwrap(), 1.0).unwrap();
            (phi2 * w10(1.0, tau, phi2).unwrap() - h).abs()
        })
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[0] < 0.1);
}

#[test]
fn tanh_profile_improves_as_tau_grows() {
    let phi2 = 1.0;
    let sup = |tau: f64| {
        (0..=60)
            .map(|j| {
                let z = -3.0 + 0.1 * j as f64;
                let xi = 2.0 * z / tau.sqrt();
                (w10(xi, tau, phi2).unwrap() + tau.sqrt() * z.tanh() / phi2).abs()
            })
            .fold(0.0, f64::max)
    };
    let e = [sup(10.0), sup(20.0), sup(40.0)];
    assert!(e[0] > e[1] && e[1] > e[2], "{e:?}");
}

#[test]
fn w10_is_odd() {
    for xi in [0.1, 0.8, 2.5] {
        for tau in [-6.0, 0.0, 4.0, 40.0] {
            let a = w10(xi, tau, 1.0).unwrap();
            let b = w10(-xi, tau, 1.0).unwrap();
            assert!((a + b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
