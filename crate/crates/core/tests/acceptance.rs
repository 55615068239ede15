//! Acceptance run: one `[PASS]`/`[FAIL]` line per criterion, non-zero exit
//! status if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use pasym::colehopf::{
    heat_derivatives, scaling_exponents, u_inner, u_inner_jet, w10, InnerPoint, Rational,
};
use pasym::fold::{fold_root, outer_leading, phase_coefficient, FoldQuery};
use pasym::initial_layer::{StepOracleConfig, TanhProfile};
use pasym::oracle::{self, conserved_mass, Boundary, FarField, GridSpec, SampledField};
use pasym::verify::{
    fit_order, initial_layer_comparison, residual_ratio, residual_sweep, LayerSweepConfig,
    OrderBand, RegionSpec,
};
use pasym::FluxModel;

struct Outcome {
    passed: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn ac1_residual_order() -> Outcome {
    let flux = FluxModel::cubic_perturbed();
    let eps = [1e-2, 1e-3, 1e-4, 1e-5];
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [1u32, 2] {
        let r = residual_sweep(
            n,
            &flux,
            &eps,
            &RegionSpec::omega_eps(n),
            10_000,
            OrderBand::default(),
        )
        .unwrap();
        ok &= r.passed;
        detail.push(format!(
            "n={n}: order {:.4} (predicted {}) r2 {:.6}",
            r.fitted_order.unwrap_or(f64::NAN),
            r.predicted_order_exact,
            r.r_squared.unwrap_or(f64::NAN)
        ));
    }
    outcome(ok, detail.join("; "))
}

fn inner_grid(eps: f64, n: u32) -> Vec<InnerPoint> {
    let ex = scaling_exponents(n).unwrap();
    let mut pts = Vec::new();
    for i in 0..7 {
        for k in 0..7 {
            let c = -3.0 + i as f64;
            let b = -2.5 + 0.8 * k as f64;
            pts.push(
                InnerPoint::new(c * eps.powf(ex.sigma_f64()), b * eps.powf(ex.mu_f64()), eps)
                    .unwrap(),
            );
        }
    }
    pts
}

fn ac2_exact_identities() -> Outcome {
    let eps_values = [1e-2, 1e-3, 1e-4, 1e-5];
    let mut quad_max: f64 = 0.0;
    for n in [1u32, 2] {
        for &eps in &eps_values {
            quad_max = quad_max.max(
                residual_ratio(
                    n,
                    &FluxModel::burgers(),
                    eps,
                    &RegionSpec::omega_eps(n),
                    2_000,
                )
                .unwrap(),
            );
        }
    }
    let (mut fd_max, mut moment_max, mut burgers_max): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in [1u32, 2] {
        let ex = scaling_exponents(n).unwrap();
        for eps in [1e-2f64, 1e-4] {
            for p in inner_grid(eps, n) {
                let h = heat_derivatives(&p, n).unwrap();
                let vt = h.v_t.ratio(&h.v);
                let vxx = h.v_xx.ratio(&h.v);
                moment_max = moment_max.max((vt - eps * vxx).abs() / vt.abs().max(eps * vxx.abs()));

                let ht = 2e-3 * eps.powf(ex.mu_f64());
                let v = |dt: f64| {
                    heat_derivatives(&InnerPoint::new(p.x, p.t + dt, eps).unwrap(), n)
                        .unwrap()
                        .v
                        .ratio(&h.v)
                };
                let vt_fd = (v(ht) - v(-ht)) / (2.0 * ht);
                fd_max =
                    fd_max.max((vt_fd - eps * vxx).abs() / (vt.abs() + eps.powf(-ex.mu_f64())));

                let j = u_inner_jet(&p, n, 1.0).unwrap();
                let terms = [j.u_t, j.u * j.u_x, -eps * j.u_xx];
                let scale: f64 = terms.iter().map(|t| t.abs()).sum();
                burgers_max = burgers_max.max(terms.iter().sum::<f64>().abs() / scale);
            }
        }
    }
    outcome(
        quad_max <= 1e-9 && fd_max <= 1e-6 && moment_max <= 1e-12 && burgers_max <= 1e-8,
        format!(
            "quadratic ratio {quad_max:.2e} (<=1e-9); heat FD {fd_max:.2e} (<=1e-6); heat moments {moment_max:.2e} (<=1e-12); Burgers {burgers_max:.2e} (<=1e-8)"
        ),
    )
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn ac3_leading_order() -> Outcome {
    let omega1: Vec<f64> = [-5.0, -10.0, -20.0]
        .iter()
        .map(|&tau| {
            let h = outer_leading(&FoldQuery::new(1.0, tau, 1).unwrap(), 1.0).unwrap();
            (w10(1.0, tau, 1.0).unwrap() - h).abs()
        })
        .collect();
    let omega2: Vec<f64> = [10.0f64, 20.0, 40.0]
        .iter()
        .map(|&tau| {
            (0..=600)
                .map(|j| {
                    let z = -3.0 + 0.01 * j as f64;
                    (w10(2.0 * z / tau.sqrt(), tau, 1.0).unwrap() + tau.sqrt() * z.tanh()).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let mut odd: f64 = 0.0;
    for i in 1..=40 {
        for tau in [-10.0, -2.0, 0.0, 3.0, 15.0, 40.0] {
            let xi = 0.1 * i as f64;
            let a = w10(xi, tau, 1.0).unwrap();
            odd = odd.max((a + w10(-xi, tau, 1.0).unwrap()).abs() / a.abs().max(1.0));
        }
    }
    outcome(
        strictly_decreasing(&omega1) && strictly_decreasing(&omega2) && odd <= 1e-12,
        format!(
            "Omega1 errors {}; Omega2 tanh errors {}; oddness {odd:.1e}",
            sci(&omega1),
            sci(&omega2)
        ),
    )
}

fn ac4_initial_layer() -> Outcome {
    let cfg = LayerSweepConfig::default();
    let mus = [0.2, 0.1, 0.05];
    let profile = Arc::new(TanhProfile {
        nu_minus: 1.0,
        nu_plus: -1.0,
    });
    let runs: Vec<_> = mus
        .iter()
        .map(|&mu| {
            initial_layer_comparison(
                profile.clone(),
                &FluxModel::burgers(),
                mu,
                &cfg,
                &StepOracleConfig::default(),
            )
            .unwrap()
        })
        .collect();
    let comp: Vec<f64> = runs.iter().map(|r| r.composite_sup_error).collect();
    let renorm: Vec<f64> = runs.iter().map(|r| r.renormalized_sup_error).collect();
    let slope = |e: &[f64]| {
        let pts: Vec<(f64, f64)> = mus.iter().copied().zip(e.iter().copied()).collect();
        fit_order(&pts).unwrap().slope
    };
    let (sc, sr) = (slope(&comp), slope(&renorm));
    outcome(
        strictly_decreasing(&comp) && strictly_decreasing(&renorm) && sc >= 0.2 && sr >= 0.2,
        format!(
            "composite {} slope {sc:.2}; renormalized {} slope {sr:.2} (>=0.2)",
            sci(&comp),
            sci(&renorm)
        ),
    )
}

fn shock_run(nx: usize, substeps: usize) -> SampledField {
    let q = |x: f64| -(x / 0.2).tanh();
    let grid = GridSpec::uniform(-3.0, 3.0, nx, 0.0, 1.0, 5).with_substeps(substeps);
    oracle::solve(&FluxModel::burgers(), &q, 0.1, &grid, Boundary::FarField)
        .unwrap()
        .field
}

fn nested_error(coarse: &SampledField, fine: &SampledField) -> f64 {
    let stride = (fine.nx() - 1) / (coarse.nx() - 1);
    let mut err: f64 = 0.0;
    for k in 0..coarse.nt() {
        for i in 0..coarse.nx() {
            err = err.max((coarse.at(k, i) - fine.at(k, i * stride)).abs());
        }
    }
    err
}

fn ac5_oracle_integrity() -> Outcome {
    // steep step plus an off-centre bump: no symmetry makes the mass trivially constant
    let q = |x: f64| -(x / 0.01).tanh() + 0.5 * (-((x - 0.5) / 0.2).powi(2)).exp();
    let grid = GridSpec::uniform(-4.0, 4.0, 1600, 0.0, 1.0, 21)
        .with_substeps(10)
        .with_refinement(0.0, 0.0005);
    let run = oracle::solve(&FluxModel::burgers(), &q, 0.1, &grid, Boundary::FarField).unwrap();
    let violation = run.diagnostics.max_principle_violation;
    let drift = conserved_mass(&run.field, &FarField::from_boundaries(&run.field)).relative_drift;

    let reference = shock_run(3201, 32);
    let e1 = nested_error(&shock_run(201, 2), &reference);
    let e2 = nested_error(&shock_run(401, 4), &reference);
    let factor = e1 / e2;
    outcome(
        violation <= 1e-10 && drift <= 1e-8 && (3.2..=4.8).contains(&factor),
        format!("max-principle violation {violation:.1e}; mass drift {drift:.1e}; convergence factor {factor:.3}"),
    )
}

fn ac6_exponents() -> Outcome {
    let all = (1..=50u32).all(|n| scaling_exponents(n).unwrap().balance_holds());
    let e1 = scaling_exponents(1).unwrap();
    let printed = e1.sigma == Rational::new(3, 4) && e1.mu == Rational::new(1, 2);
    outcome(
        all && printed,
        format!(
            "balance for n=1..50: {all}; n=1 gives sigma={}, mu={}",
            e1.sigma, e1.mu
        ),
    )
}

fn brute_force_argmax(xi: f64, tau: f64) -> f64 {
    let a = phase_coefficient(1);
    let p = |s: f64| -a * s.powi(4) + tau * s * s - xi * s;
    let dp = |s: f64| -4.0 * a * s.powi(3) + 2.0 * tau * s - xi;
    let reach = 2.0 * (1.0 + tau.abs() + xi.abs());
    let samples = 100_000;
    let h = 2.0 * reach / samples as f64;
    let best = (0..=samples)
        .map(|i| -reach + h * i as f64)
        .max_by(|&u, &v| p(u).total_cmp(&p(v)))
        .unwrap();
    let (mut lo, mut hi) = (best - h, best + h);
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

fn ac7_cross_module() -> Outcome {
    let mut scaling: f64 = 0.0;
    for eps in [1e-2f64, 1e-4] {
        for i in 0..20 {
            for k in 0..20 {
                let xi = -4.0 + 8.0 * (i as f64 + 0.5) / 20.0;
                let tau = -4.0 + 8.0 * (k as f64 + 0.5) / 20.0;
                let p = InnerPoint::new(xi * eps.powf(0.75), tau * eps.sqrt(), eps).unwrap();
                let a = u_inner(&p, 1, 1.0).unwrap();
                let b = eps.powf(0.25) * w10(xi, tau, 1.0).unwrap();
                scaling = scaling.max((a - b).abs() / a.abs().max(b.abs()));
            }
        }
    }
    let mut fold: f64 = 0.0;
    for i in 0..30 {
        for k in 0..30 {
            let xi = -3.0 + 6.0 * (i as f64 + 0.5) / 30.0;
            let tau = -4.0 + 8.0 * (k as f64 + 0.5) / 30.0;
            let root = fold_root(&FoldQuery::new(xi, tau, 1).unwrap()).root;
            let brute = 2.0 * brute_force_argmax(xi, tau);
            fold = fold.max((root - brute).abs() / brute.abs().max(1.0));
        }
    }
    outcome(
        scaling <= 1e-10 && fold <= 1e-10,
        format!("u_inner vs eps^(1/4) w10 {scaling:.1e}; fold root vs brute force {fold:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        ("AC1 residual order", ac1_residual_order),
        ("AC2 exact identities", ac2_exact_identities),
        ("AC3 leading-order properties", ac3_leading_order),
        ("AC4 initial-layer formulas", ac4_initial_layer),
        ("AC5 oracle integrity", ac5_oracle_integrity),
        ("AC6 exponent algebra", ac6_exponents),
        ("AC7 cross-module consistency", ac7_cross_module),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let o = check();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {name}: {} ({:.1}s)",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failures += usize::from(!o.passed);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
