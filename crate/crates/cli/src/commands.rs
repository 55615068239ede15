use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use pasym::colehopf::{scaling_exponents, w10, Rational};
use pasym::fold::{outer_leading, FoldQuery};
use pasym::initial_layer::{AlgebraicProfile, InitialProfile, StepOracleConfig, TanhProfile};
use pasym::oracle::{self, Boundary, FluxScheme, GridSpec, SolverOptions};
use pasym::verify::{
    initial_layer_comparison, residual_sweep, DomainExponent, LayerSweepConfig, OrderBand,
    RegionSpec,
};
use pasym::FluxModel;

use crate::config::{
    ExponentArgs, FluxChoice, FoldArgs, FormatChoice, InitialChoice, LayerArgs, OracleArgs,
    ProfileChoice, ResidualArgs, SchemeChoice, TableChoice,
};

type CmdResult = Result<bool, String>;

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, String> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("cannot create {}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(e: io::Error) -> String {
    format!("write failed: {e}")
}

fn flux_model(choice: FluxChoice) -> FluxModel {
    match choice {
        FluxChoice::Cubic => FluxModel::cubic_perturbed(),
        FluxChoice::Quadratic | FluxChoice::Burgers => FluxModel::burgers(),
    }
}

fn parse_exponent(raw: &str) -> Result<DomainExponent, String> {
    match raw.trim() {
        "kappa" => Ok(DomainExponent::Kappa),
        "sigma" => Ok(DomainExponent::Sigma),
        other => {
            let (p, q) = other.split_once('/').unwrap_or((other, "1"));
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| format!("bad domain exponent {raw:?}"))?;
            let q: i64 = q
                .trim()
                .parse()
                .map_err(|_| format!("bad domain exponent {raw:?}"))?;
            if q == 0 {
                return Err(format!("bad domain exponent {raw:?}"));
            }
            Ok(DomainExponent::Custom(Rational::new(p, q)))
        }
    }
}

pub fn residual_order(a: ResidualArgs) -> CmdResult {
    let n = a.n.unwrap_or(1);
    let flux = flux_model(a.flux.unwrap_or(FluxChoice::Cubic));
    let eps = a.eps.unwrap_or_else(|| vec![1e-2, 1e-3, 1e-4, 1e-5]);
    let mut region = RegionSpec::omega_eps(n);
    region.k = a.k.unwrap_or(1.0);
    region.domain_exponent = parse_exponent(a.domain_exponent.as_deref().unwrap_or("kappa"))?;
    let band = OrderBand {
        half_width: a.band.unwrap_or(0.1),
        min_r_squared: a.min_r_squared.unwrap_or(0.95),
    };
    let report = residual_sweep(n, &flux, &eps, &region, a.samples.unwrap_or(10_000), band)
        .map_err(|e| e.to_string())?;
    let mut w = output(a.out.as_deref())?;
    writeln!(w, "{}", report.to_json().map_err(|e| e.to_string())?).map_err(io_err)?;
    w.flush().map_err(io_err)?;
    Ok(report.passed)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn fold_profile(a: FoldArgs) -> CmdResult {
    let tanh = a.tanh.unwrap_or(false);
    let phi2 = a.phi2.unwrap_or(1.0);
    let taus = a.tau.unwrap_or_else(|| {
        if tanh {
            vec![10.0, 20.0, 40.0]
        } else {
            vec![-20.0, -10.0, -5.0]
        }
    });
    let (lo, hi, points) = (
        a.min.unwrap_or(-3.0),
        a.max.unwrap_or(3.0),
        a.points.unwrap_or(61),
    );
    if points == 0 || !(lo <= hi) {
        return Err("need points >= 1 and min <= max".into());
    }
    if !(phi2 > 0.0) {
        return Err(format!("phi2 must be positive, got {phi2}"));
    }
    if tanh && taus.iter().any(|&t| !(t > 0.0)) {
        return Err("the tanh comparison needs tau > 0".into());
    }
    let mut w = output(a.out.as_deref())?;
    if tanh {
        writeln!(w, "xi,tau,z,w10,tanh_profile,difference").map_err(io_err)?;
    } else {
        writeln!(w, "xi,tau,w10,fold_over_phi2,difference").map_err(io_err)?;
    }
    for &tau in &taus {
        for v in linspace(lo, hi, points) {
            if tanh {
                let xi = 2.0 * v / tau.sqrt();
                let inner = w10(xi, tau, phi2).map_err(|e| e.to_string())?;
                let profile = -tau.sqrt() * v.tanh() / phi2;
                writeln!(w, "{xi},{tau},{v},{inner},{profile},{}", inner - profile)
                    .map_err(io_err)?;
            } else {
                let inner = w10(v, tau, phi2).map_err(|e| e.to_string())?;
                let q = FoldQuery::new(v, tau, 1).map_err(|e| e.to_string())?;
                let outer = outer_leading(&q, phi2).map_err(|e| e.to_string())?;
                writeln!(w, "{v},{tau},{inner},{outer},{}", inner - outer).map_err(io_err)?;
            }
        }
    }
    w.flush().map_err(io_err)?;
    Ok(true)
}

pub fn initial_layer(a: LayerArgs) -> CmdResult {
    let (nu_minus, nu_plus) = (a.nu_minus.unwrap_or(1.0), a.nu_plus.unwrap_or(-1.0));
    if nu_minus == nu_plus {
        return Err(format!(
            "constant initial profile (nu_minus = nu_plus = {nu_minus}) has no initial layer; need nu_minus > nu_plus"
        ));
    }
    let profile: Arc<dyn InitialProfile> = match a.profile.unwrap_or(ProfileChoice::Tanh) {
        ProfileChoice::Tanh => Arc::new(TanhProfile { nu_minus, nu_plus }),
        ProfileChoice::Algebraic => Arc::new(AlgebraicProfile { nu_minus, nu_plus }),
    };
    let flux = flux_model(a.flux.unwrap_or(FluxChoice::Burgers));
    let d = LayerSweepConfig::default();
    let cfg = LayerSweepConfig {
        eps: a.eps.unwrap_or(d.eps),
        t_end: a.t_end.unwrap_or(d.t_end),
        window: a.window.unwrap_or(d.window),
        domain: a.domain.unwrap_or(d.domain),
        nx: a.nx.unwrap_or(d.nx),
        nt: a.nt.unwrap_or(d.nt),
        substeps: a.substeps.unwrap_or(d.substeps),
        cells_per_rho: a.cells_per_rho.unwrap_or(d.cells_per_rho),
    };
    let mus = a.mu.unwrap_or_else(|| vec![0.2, 0.1, 0.05]);
    let step = StepOracleConfig {
        theta_max: (cfg.t_end / cfg.eps).max(1.0),
        ..StepOracleConfig::default()
    };
    let table = a.table.unwrap_or(TableChoice::Summary);
    let mut w = output(a.out.as_deref())?;
    match table {
        TableChoice::Summary => writeln!(w, "mu,composite_sup_error,renormalized_sup_error"),
        TableChoice::Points => writeln!(w, "mu,x,t,oracle,composite,renormalized"),
    }
    .map_err(io_err)?;
    for &mu in &mus {
        let c = initial_layer_comparison(profile.clone(), &flux, mu, &cfg, &step)
            .map_err(|e| e.to_string())?;
        match table {
            TableChoice::Summary => {
                writeln!(
                    w,
                    "{mu},{},{}",
                    c.composite_sup_error, c.renormalized_sup_error
                )
                .map_err(io_err)?;
            }
            TableChoice::Points => {
                let f = &c.oracle;
                for k in 0..f.nt() {
                    for i in 0..f.nx() {
                        writeln!(
                            w,
                            "{mu},{},{},{},{},{}",
                            f.x[i],
                            f.t[k],
                            f.at(k, i),
                            c.composite.at(k, i),
                            c.renormalized.at(k, i)
                        )
                        .map_err(io_err)?;
                    }
                }
            }
        }
    }
    w.flush().map_err(io_err)?;
    Ok(true)
}

pub fn oracle_run(a: OracleArgs) -> CmdResult {
    let flux = flux_model(a.flux.unwrap_or(FluxChoice::Burgers));
    let eps = a.eps.unwrap_or(0.1);
    let (nu_minus, nu_plus) = (a.nu_minus.unwrap_or(1.0), a.nu_plus.unwrap_or(-1.0));
    let width = a.width.unwrap_or(0.01);
    if !(eps > 0.0) || !(width > 0.0) {
        return Err("eps and width must be positive".into());
    }
    let (mid, half) = (0.5 * (nu_minus + nu_plus), 0.5 * (nu_minus - nu_plus));
    let kind = a.initial.unwrap_or(InitialChoice::Shock);
    // the viscous shock of u²/2-type fluxes has width 2ε/(φ''·half-jump)
    let shock_width = 2.0 * eps / (flux.curvature() * half.abs().max(f64::MIN_POSITIVE));
    let q = move |x: f64| match kind {
        InitialChoice::Shock => mid - half * (x / shock_width).tanh(),
        InitialChoice::Tanh => mid - half * (x / width).tanh(),
        InitialChoice::Constant => nu_minus,
    };
    let mut grid = GridSpec::uniform(
        a.x_min.unwrap_or(-3.0),
        a.x_max.unwrap_or(3.0),
        a.nx.unwrap_or(601),
        a.t0.unwrap_or(0.0),
        a.t_end.unwrap_or(1.0),
        a.nt.unwrap_or(11),
    )
    .with_substeps(a.substeps.unwrap_or(10));
    if let Some(h) = a.h_min {
        grid = grid.with_refinement(0.0, h);
    }
    let opts = SolverOptions {
        scheme: match a.scheme.unwrap_or(SchemeChoice::Central) {
            SchemeChoice::Central => FluxScheme::Central,
            SchemeChoice::Llf => FluxScheme::LocalLaxFriedrichs,
        },
        ..SolverOptions::default()
    };
    let format = a.format.unwrap_or(FormatChoice::Csv);
    if format == FormatChoice::Binary && a.out.is_none() {
        return Err("binary output needs --out".into());
    }
    let run = oracle::solve_with(&flux, &q, eps, &grid, Boundary::FarField, &opts)
        .map_err(|e| e.to_string())?;
    for warning in &run.diagnostics.warnings {
        eprintln!("warning: {warning}");
    }
    let mut w = output(a.out.as_deref())?;
    match format {
        FormatChoice::Csv => oracle::write_csv(&run.field, &mut w),
        FormatChoice::Binary => oracle::write_binary(&run.field, &mut w),
    }
    .map_err(|e| e.to_string())?;
    w.flush().map_err(io_err)?;
    Ok(true)
}

pub fn exponents(a: ExponentArgs) -> CmdResult {
    let n_max = a.n_max.unwrap_or(10);
    if n_max == 0 {
        return Err("n_max must be at least 1".into());
    }
    let mut w = output(a.out.as_deref())?;
    writeln!(w, "n,sigma,mu,kappa").map_err(io_err)?;
    for n in 1..=n_max {
        let ex = scaling_exponents(n).map_err(|e| e.to_string())?;
        writeln!(w, "{n},{},{},{}", ex.sigma, ex.mu, ex.kappa).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_exponent_parsing() {
        assert_eq!(parse_exponent("kappa").unwrap(), DomainExponent::Kappa);
        assert_eq!(parse_exponent("sigma").unwrap(), DomainExponent::Sigma);
        assert_eq!(
            parse_exponent(" 3/4 ").unwrap(),
            DomainExponent::Custom(Rational::new(3, 4))
        );
        assert_eq!(
            parse_exponent("1").unwrap(),
            DomainExponent::Custom(Rational::new(1, 1))
        );
        assert!(parse_exponent("1/0").is_err());
        assert!(parse_exponent("half").is_err());
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(-1.0, 1.0, 3), vec![-1.0, 0.0, 1.0]);
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
    }
}
