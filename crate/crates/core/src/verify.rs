//! Quantitative checks: the normalized residual of `u_in`, empirical order
//! fits, the region predicates and field comparisons.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::colehopf::{ratio_f64, scaling_exponents, u_inner_jet, InnerPoint, Rational};
use crate::error::{invalid, Error, Result};
use crate::flux::FluxModel;
use crate::initial_layer::{
    composite_solution, renormalized_solution, InitialLayerProblem, InitialProfile,
    StepOracleConfig,
};
use crate::oracle::{self, Boundary, GridSpec, SampledField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionKind {
    Omega1,
    Omega2,
    OmegaEps,
}

/// Exponent `e` of the `x` scaling in `|x ε^{-e}| + |t| < K ε^μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainExponent {
    Kappa,
    Sigma,
    Custom(Rational),
}

impl DomainExponent {
    pub fn resolve(&self, n: u32) -> Result<Rational> {
        let ex = scaling_exponents(n)?;
        Ok(match *self {
            DomainExponent::Kappa => ex.kappa,
            DomainExponent::Sigma => ex.sigma,
            DomainExponent::Custom(r) => r,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSpec {
    pub kind: RegionKind,
    pub gamma1: f64,
    pub gamma2: f64,
    pub k: f64,
    pub domain_exponent: DomainExponent,
    /// Singularity index, used by `OmegaEps` only.
    pub n: u32,
}

impl RegionSpec {
    fn with_kind(kind: RegionKind, n: u32) -> Self {
        Self {
            kind,
            gamma1: 1.0,
            gamma2: 1.5,
            k: 1.0,
            domain_exponent: DomainExponent::Kappa,
            n,
        }
    }

    pub fn omega1() -> Self {
        Self::with_kind(RegionKind::Omega1, 1)
    }

    pub fn omega2() -> Self {
        Self::with_kind(RegionKind::Omega2, 1)
    }

    pub fn omega_eps(n: u32) -> Self {
        Self::with_kind(RegionKind::OmegaEps, n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma1 > 0.0 && self.gamma1 < 2.0) {
            return Err(invalid(
                "gamma1",
                format!("must lie in (0, 2), got {}", self.gamma1),
            ));
        }
        if !(self.gamma2 > self.gamma1 && self.gamma2 < 2.0) {
            return Err(invalid(
                "gamma2",
                format!("must lie in (gamma1, 2), got {}", self.gamma2),
            ));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(invalid("K", format!("must be positive, got {}", self.k)));
        }
        self.domain_exponent.resolve(self.n)?;
        Ok(())
    }

    /// Half-widths `(X, T)` of the `Ω_ε` diamond `|x|/X + |t|/T < 1`.
    pub fn diamond(&self, eps: f64) -> Result<(f64, f64)> {
        if self.kind != RegionKind::OmegaEps {
            return Err(invalid("region", "only OmegaEps depends on eps"));
        }
        self.validate()?;
        if !(eps > 0.0) {
            return Err(invalid("eps", format!("must be positive, got {eps}")));
        }
        let mu = scaling_exponents(self.n)?.mu_f64();
        let e = ratio_f64(self.domain_exponent.resolve(self.n)?);
        let t_half = self.k * eps.powf(mu);
        Ok((t_half * eps.powf(e), t_half))
    }

    /// `count` points on the boundary of `Ω_ε`, walking the four edges.
    pub fn boundary_points(&self, eps: f64, count: usize) -> Result<Vec<(f64, f64)>> {
        let (xh, th) = self.diamond(eps)?;
        Ok((0..count)
            .map(|j| {
                let a = 4.0 * j as f64 / count as f64;
                let edge = a.floor();
                let s = a - edge;
                let (p, q) = match edge as u32 {
                    0 => (1.0 - s, s),
                    1 => (-s, 1.0 - s),
                    2 => (-(1.0 - s), -s),
                    _ => (s, -(1.0 - s)),
                };
                (xh * p, th * q)
            })
            .collect())
    }
}

/// Region membership. For `Omega1`/`Omega2`, `(a, b)` is `(ξ, τ)` and `eps`
/// is ignored; for `OmegaEps`, `(a, b)` is the physical `(x, t)`.
pub fn region_contains(region: &RegionSpec, a: f64, b: f64, eps: f64) -> bool {
    match region.kind {
        RegionKind::Omega1 => !(b > 0.0 && a.abs() < b.powf(region.gamma1 - 0.5)),
        RegionKind::Omega2 => b > 0.0 && a.abs() * b.sqrt() < b.powf(region.gamma2),
        RegionKind::OmegaEps => match (
            region.diamond(eps),
            region.domain_exponent.resolve(region.n),
        ) {
            (Ok((_, th)), Ok(e)) => (a * eps.powf(-ratio_f64(e))).abs() + b.abs() < th,
            _ => false,
        },
    }
}

/// Van der Corput radical inverse.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Halton points of the unit square mapped onto the diamond `|p| + |q| ≤ 1`.
fn diamond_samples(count: usize) -> Vec<(f64, f64)> {
    (1..=count as u64)
        .map(|i| {
            let u = radical_inverse(i, 2);
            let v = radical_inverse(i, 3);
            (u - v, u + v - 1.0)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct ResidualTerms {
    numerator: f64,
    denominator: f64,
}

fn residual_terms(flux: &FluxModel, n: u32, x: f64, t: f64, eps: f64) -> Result<ResidualTerms> {
    let jet = u_inner_jet(&InnerPoint::new(x, t, eps)?, n, flux.curvature())?;
    let ut = jet.u_t;
    let adv = flux.phi1(jet.u) * jet.u_x;
    let diff = eps * jet.u_xx;
    Ok(ResidualTerms {
        numerator: (ut + adv - diff).abs(),
        denominator: ut.abs() + adv.abs() + diff.abs(),
    })
}

/// Compass search for a local maximum of `f` over the diamond.
fn refine_max(f: &dyn Fn(f64, f64) -> f64, start: (f64, f64), mut best: f64) -> f64 {
    let (mut p, mut q) = start;
    let mut step = 0.05;
    while step > 1e-5 {
        let mut moved = false;
        for (dp, dq) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let (np, nq) = (p + step * dp, q + step * dq);
            if np.abs() + nq.abs() > 1.0 {
                continue;
            }
            let v = f(np, nq);
            if v > best {
                best = v;
                p = np;
                q = nq;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

/// `sup|u_t + φ'(u)u_x - εu_xx| / sup(|u_t| + |φ'(u)u_x| + |εu_xx|)` over
/// `Ω_ε`, each sup estimated by `samples` Halton points plus a local search
/// from the best sample.
pub fn residual_ratio(
    n: u32,
    flux: &FluxModel,
    eps: f64,
    region: &RegionSpec,
    samples: usize,
) -> Result<f64> {
    if region.kind != RegionKind::OmegaEps {
        return Err(invalid("region", "residual ratio needs an OmegaEps region"));
    }
    if region.n != n {
        return Err(invalid(
            "region",
            format!(
                "region built for n = {}, residual asked for n = {n}",
                region.n
            ),
        ));
    }
    if samples == 0 {
        return Err(invalid("samples", "must be positive"));
    }
    let (xh, th) = region.diamond(eps)?;
    let eval = |p: f64, q: f64| residual_terms(flux, n, xh * p, th * q, eps);
    let points = diamond_samples(samples);
    let terms = points
        .par_iter()
        .map(|&(p, q)| eval(p, q))
        .collect::<Result<Vec<_>>>()?;
    let arg_max = |key: fn(&ResidualTerms) -> f64| {
        terms
            .iter()
            .enumerate()
            .max_by(|a, b| key(a.1).total_cmp(&key(b.1)))
            .map(|(i, r)| (points[i], key(r)))
            .expect("samples is positive")
    };
    let (num_start, num_best) = arg_max(|r| r.numerator);
    let (den_start, den_best) = arg_max(|r| r.denominator);
    let objective = |key: fn(&ResidualTerms) -> f64| {
        move |p: f64, q: f64| eval(p, q).map(|r| key(&r)).unwrap_or(f64::NEG_INFINITY)
    };
    let (numerator, denominator) = rayon::join(
        || refine_max(&objective(|r| r.numerator), num_start, num_best),
        || refine_max(&objective(|r| r.denominator), den_start, den_best),
    );
    if !(denominator >= 1e-300) {
        return Err(Error::DegenerateRegion(denominator));
    }
    Ok(numerator / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderFit {
    pub slope: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(ln ε, ln value)`.
pub fn fit_order(entries: &[(f64, f64)]) -> Result<OrderFit> {
    if entries.len() < 3 {
        return Err(invalid(
            "entries",
            format!("need at least 3, got {}", entries.len()),
        ));
    }
    if let Some(&(e, v)) = entries
        .iter()
        .find(|&&(e, v)| !(e > 0.0) || !(v > 0.0) || !v.is_finite())
    {
        return Err(invalid(
            "entries",
            format!("eps and values must be positive, got ({e}, {v})"),
        ));
    }
    let pts: Vec<(f64, f64)> = entries.iter().map(|&(e, v)| (e.ln(), v.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("entries", "eps values must be distinct"));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(OrderFit { slope, r_squared })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub eps: f64,
    pub ratio: f64,
}

/// Acceptance band for the fitted order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderBand {
    pub half_width: f64,
    pub min_r_squared: f64,
}

impl Default for OrderBand {
    fn default() -> Self {
        Self {
            half_width: 0.1,
            min_r_squared: 0.95,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub n: u32,
    pub flux_id: String,
    /// Sorted by decreasing `eps`.
    pub entries: Vec<ResidualEntry>,
    pub fitted_order: Option<f64>,
    pub predicted_order: f64,
    pub predicted_order_exact: String,
    pub r_squared: Option<f64>,
    pub samples: usize,
    /// How the two sups of the ratio are taken.
    pub sup_convention: &'static str,
    pub domain_exponent: String,
    pub k: f64,
    pub band: OrderBand,
    /// Residuals at rounding level, so no order can be fitted.
    pub near_zero_residuals: bool,
    pub passed: bool,
}

impl ResidualReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }
}

pub const SUP_CONVENTION: &str =
    "numerator and denominator each maximized independently over Omega_eps";

/// Ratios at or below this are treated as exact cancellation.
pub const NEAR_ZERO_RATIO: f64 = 1e-9;

/// Residual ratio for each `ε` (in parallel) and the fitted order.
pub fn residual_sweep(
    n: u32,
    flux: &FluxModel,
    eps_values: &[f64],
    region: &RegionSpec,
    samples: usize,
    band: OrderBand,
) -> Result<ResidualReport> {
    let mut eps_sorted = eps_values.to_vec();
    eps_sorted.sort_by(|a, b| b.total_cmp(a));
    let ratios = eps_sorted
        .par_iter()
        .map(|&eps| residual_ratio(n, flux, eps, region, samples))
        .collect::<Result<Vec<_>>>()?;
    let entries: Vec<ResidualEntry> = eps_sorted
        .iter()
        .zip(&ratios)
        .map(|(&eps, &ratio)| ResidualEntry { eps, ratio })
        .collect();
    let exponent = region.domain_exponent.resolve(n)?;
    let predicted = scaling_exponents(n)?.kappa;
    let near_zero = ratios.iter().any(|&r| r <= NEAR_ZERO_RATIO);
    let fit = if near_zero {
        None
    } else {
        Some(fit_order(
            &entries.iter().map(|e| (e.eps, e.ratio)).collect::<Vec<_>>(),
        )?)
    };
    let passed = fit.is_some_and(|f| {
        (f.slope - ratio_f64(predicted)).abs() <= band.half_width
            && f.r_squared >= band.min_r_squared
    });
    Ok(ResidualReport {
        n,
        flux_id: flux.id().to_string(),
        entries,
        fitted_order: fit.map(|f| f.slope),
        predicted_order: ratio_f64(predicted),
        predicted_order_exact: predicted.to_string(),
        r_squared: fit.map(|f| f.r_squared),
        samples,
        sup_convention: SUP_CONVENTION,
        domain_exponent: exponent.to_string(),
        k: region.k,
        band,
        near_zero_residuals: near_zero,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Norm {
    Sup,
    L1,
    L2,
}

/// Second operand of [`compare_fields`].
pub enum Reference<'a> {
    Field(&'a SampledField),
    Formula(&'a (dyn Fn(f64, f64) -> Result<f64> + Sync)),
}

fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| {
            let left = if i > 0 { xs[i] - xs[i - 1] } else { 0.0 };
            let right = if i + 1 < n { xs[i + 1] - xs[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

fn same_axis(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(p, q)| (p - q).abs() <= 1e-12 * p.abs().max(q.abs()).max(1.0))
}

/// Norm of `a - b` over the nodes of `a`. A field `b` on a different grid is
/// interpolated bilinearly and must cover `a`. Integral norms use
/// trapezoidal weights in both directions (a single node counts with weight 1).
pub fn compare_fields(a: &SampledField, b: Reference<'_>, norm: Norm) -> Result<f64> {
    let diffs: Vec<f64> = match b {
        Reference::Field(b) if same_axis(&a.x, &b.x) && same_axis(&a.t, &b.t) => {
            a.values.iter().zip(&b.values).map(|(p, q)| p - q).collect()
        }
        Reference::Field(b) => {
            let (x0, x1, t0, t1) = (a.x[0], a.x[a.nx() - 1], a.t[0], a.t[a.nt() - 1]);
            if !b.covers(x0, t0) || !b.covers(x1, t1) {
                return Err(Error::IncompatibleGrids(format!(
                    "reference covers x in [{}, {}], t in [{}, {}], need x in [{x0}, {x1}], t in [{t0}, {t1}]",
                    b.x[0],
                    b.x[b.nx() - 1],
                    b.t[0],
                    b.t[b.nt() - 1]
                )));
            }
            (0..a.values.len())
                .map(|j| {
                    let (k, i) = (j / a.nx(), j % a.nx());
                    a.values[j] - b.interpolate(a.x[i], a.t[k]).expect("coverage checked")
                })
                .collect()
        }
        Reference::Formula(f) => (0..a.values.len())
            .into_par_iter()
            .map(|j| {
                let (k, i) = (j / a.nx(), j % a.nx());
                f(a.x[i], a.t[k]).map(|v| a.values[j] - v)
            })
            .collect::<Result<_>>()?,
    };
    if norm == Norm::Sup {
        return Ok(diffs.iter().fold(0.0, |m, d| m.max(d.abs())));
    }
    let wx = trapezoid_weights(&a.x);
    let wt = trapezoid_weights(&a.t);
    let mut acc = 0.0;
    for (k, w_t) in wt.iter().enumerate() {
        for (i, w_x) in wx.iter().enumerate() {
            let d = diffs[k * a.nx() + i].abs();
            acc += w_t * w_x * if norm == Norm::L1 { d } else { d * d };
        }
    }
    Ok(if norm == Norm::L1 { acc } else { acc.sqrt() })
}

/// Oracle set-up for comparing the initial-layer formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayerSweepConfig {
    pub eps: f64,
    pub t_end: f64,
    /// Errors are measured on `|x| ≤ window`, `0 ≤ t ≤ t_end`.
    pub window: f64,
    /// Oracle domain half-width.
    pub domain: f64,
    pub nx: usize,
    pub nt: usize,
    pub substeps: usize,
    /// Smallest mesh spacing in units of `ρ`.
    pub cells_per_rho: f64,
}

impl Default for LayerSweepConfig {
    fn default() -> Self {
        Self {
            eps: 0.1,
            t_end: 0.5,
            window: 1.0,
            domain: 3.0,
            nx: 3000,
            nt: 51,
            substeps: 20,
            cells_per_rho: 20.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LayerComparison {
    pub mu: f64,
    /// Oracle restricted to the comparison window; the `t = 0` slice is the
    /// initial data for all three fields.
    pub oracle: SampledField,
    pub composite: SampledField,
    pub renormalized: SampledField,
    pub composite_sup_error: f64,
    pub renormalized_sup_error: f64,
}

/// Runs the oracle at `ρ = μ ε` and measures both formulas against it.
pub fn initial_layer_comparison(
    profile: Arc<dyn InitialProfile>,
    flux: &FluxModel,
    mu: f64,
    cfg: &LayerSweepConfig,
    step: &StepOracleConfig,
) -> Result<LayerComparison> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(invalid("mu", format!("must lie in (0, 1), got {mu}")));
    }
    let rho = mu * cfg.eps;
    let prob = InitialLayerProblem::with_step_config(profile, rho, cfg.eps, flux.clone(), step)?;
    let grid = GridSpec::uniform(-cfg.domain, cfg.domain, cfg.nx, 0.0, cfg.t_end, cfg.nt)
        .with_substeps(cfg.substeps)
        .with_refinement(0.0, rho / cfg.cells_per_rho);
    let run = oracle::solve(
        flux,
        &|x| prob.initial_value(x),
        cfg.eps,
        &grid,
        Boundary::FarField,
    )?;
    let field = run
        .field
        .restrict((-cfg.window, cfg.window), (0.0, cfg.t_end))?;
    let sample = |f: &(dyn Fn(f64, f64) -> Result<f64> + Sync)| -> Result<SampledField> {
        let pts: Vec<(f64, f64)> = field
            .t
            .iter()
            .flat_map(|&t| field.x.iter().map(move |&x| (x, t)))
            .collect();
        let values = pts
            .par_iter()
            .map(|&(x, t)| f(x, t))
            .collect::<Result<Vec<_>>>()?;
        SampledField::new(field.x.clone(), field.t.clone(), values)
    };
    let composite = sample(&|x, t| composite_solution(x, t, &prob))?;
    // the renormalized formula tends to the initial data as t → 0
    let renormalized = sample(&|x, t| {
        if t == 0.0 {
            Ok(prob.initial_value(x))
        } else {
            renormalized_solution(x, t, &prob)
        }
    })?;
    Ok(LayerComparison {
        mu,
        composite_sup_error: compare_fields(&field, Reference::Field(&composite), Norm::Sup)?,
        renormalized_sup_error: compare_fields(&field, Reference::Field(&renormalized), Norm::Sup)?,
        oracle: field,
        composite,
        renormalized,
    })
}
