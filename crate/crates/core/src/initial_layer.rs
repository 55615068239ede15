//! Large-initial-gradient asymptotics.
//!
//! Initial data `u(x, 0) = ν(x/ρ)` with a step-like profile `ν` going from
//! `ν₀⁻` to `ν₀⁺ < ν₀⁻`, in the limit `ε → 0`, `μ = ρ/ε → 0`. The inner
//! solution `Γ(η, θ)` solves the unit-viscosity problem with step data in
//! `η = x/ε`, `θ = t/ε`. For quadratic fluxes it is available in closed
//! form (Cole-Hopf); otherwise it is sampled from the reference solver.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::flux::FluxModel;
use crate::oracle::{self, Boundary, GridSpec, SampledField};
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::specfun::{heat_convolution_with_breaks, ln_erfc_half, r000};

/// A smooth bounded step-like profile `ν(σ)`.
pub trait InitialProfile: Send + Sync {
    fn value(&self, s: f64) -> f64;
    fn derivative(&self, s: f64) -> f64;
    /// `(ν₀⁻, ν₀⁺)`, the limits at `∓∞`.
    fn limits(&self) -> (f64, f64);
    /// Locations of rapid variation, used as quadrature breakpoints.
    fn features(&self) -> Vec<f64> {
        vec![0.0]
    }
    /// Interval outside of which `|ν'| < rel · sup|ν'|`.
    fn derivative_support(&self, rel: f64) -> (f64, f64) {
        let peak = (-400..=400)
            .map(|i| self.derivative(i as f64 * 0.025).abs())
            .fold(0.0, f64::max);
        let threshold = rel * peak;
        let reach = |dir: f64| {
            let mut s = 1.0;
            while self.derivative(dir * s).abs() >= threshold && s < 1e12 {
                s *= 1.25;
            }
            dir * s
        };
        (reach(-1.0), reach(1.0))
    }
}

/// `ν(σ) = (ν₀⁻ + ν₀⁺)/2 - (ν₀⁻ - ν₀⁺)/2 · tanh σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TanhProfile {
    pub nu_minus: f64,
    pub nu_plus: f64,
}

impl InitialProfile for TanhProfile {
    fn value(&self, s: f64) -> f64 {
        0.5 * (self.nu_minus + self.nu_plus) - 0.5 * (self.nu_minus - self.nu_plus) * s.tanh()
    }

    fn derivative(&self, s: f64) -> f64 {
        let c = s.cosh();
        -0.5 * (self.nu_minus - self.nu_plus) / (c * c)
    }

    fn limits(&self) -> (f64, f64) {
        (self.nu_minus, self.nu_plus)
    }
}

/// `ν(σ) = (ν₀⁻ + ν₀⁺)/2 - (ν₀⁻ - ν₀⁺)/2 · σ/√(1+σ²)`: power-law tails
/// `ν(σ) = ν₀^± ∓ … /σ² + …`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraicProfile {
    pub nu_minus: f64,
    pub nu_plus: f64,
}

impl InitialProfile for AlgebraicProfile {
    fn value(&self, s: f64) -> f64 {
        0.5 * (self.nu_minus + self.nu_plus)
            - 0.5 * (self.nu_minus - self.nu_plus) * s / (1.0 + s * s).sqrt()
    }

    fn derivative(&self, s: f64) -> f64 {
        -0.5 * (self.nu_minus - self.nu_plus) / (1.0 + s * s).powf(1.5)
    }

    fn limits(&self) -> (f64, f64) {
        (self.nu_minus, self.nu_plus)
    }
}

/// Resolution of the reference solve backing `Γ` for non-quadratic fluxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOracleConfig {
    pub theta_max: f64,
    /// Mesh spacing at `η = 0`; the step is mollified over one such cell.
    pub h_min: f64,
    /// Mesh spacing far from the origin.
    pub h_max: f64,
    /// Stored slice spacing in `θ`.
    pub slice_dt: f64,
    pub substeps: usize,
}

impl Default for StepOracleConfig {
    fn default() -> Self {
        Self {
            theta_max: 10.0,
            h_min: 0.005,
            h_max: 0.05,
            slice_dt: 0.01,
            substeps: 1,
        }
    }
}

/// The inner step solution `Γ(η, θ)`.
#[derive(Debug, Clone)]
pub enum StepSolution {
    /// `φ(u) = c₀ + linear·u + curvature·u²/2`.
    ClosedForm {
        nu_minus: f64,
        nu_plus: f64,
        linear: f64,
        curvature: f64,
    },
    Sampled {
        nu_minus: f64,
        nu_plus: f64,
        field: Arc<SampledField>,
    },
}

/// Closed-form step solution of `v_θ + v v_η = v_ηη` with `v(η, 0) = v⁻` for
/// `η < 0` and `v⁺` for `η > 0`:
/// `v = (v⁻ w⁻ + v⁺ w⁺)/(w⁻ + w⁺)` with
/// `w⁻ = exp(v⁻²θ/4 - v⁻η/2) erfc((η - v⁻θ)/(2√θ))` and
/// `w⁺ = exp(v⁺²θ/4 - v⁺η/2) erfc((v⁺θ - η)/(2√θ))`, weights combined in logs.
pub fn burgers_step(eta: f64, theta: f64, v_minus: f64, v_plus: f64) -> f64 {
    let root = 2.0 * theta.sqrt();
    let lw_minus = v_minus * v_minus * theta / 4.0 - v_minus * eta / 2.0
        + ln_erfc_half((eta - v_minus * theta) / root);
    let lw_plus = v_plus * v_plus * theta / 4.0 - v_plus * eta / 2.0
        + ln_erfc_half((v_plus * theta - eta) / root);
    // logistic(lw⁻ - lw⁺) is the weight of v⁻
    let d = lw_minus - lw_plus;
    let weight_minus = if d >= 0.0 {
        1.0 / (1.0 + (-d).exp())
    } else {
        let e = d.exp();
        e / (1.0 + e)
    };
    v_plus + (v_minus - v_plus) * weight_minus
}

impl StepSolution {
    /// Closed form for quadratic fluxes, otherwise a reference solve.
    pub fn for_flux(
        flux: &FluxModel,
        nu_minus: f64,
        nu_plus: f64,
        cfg: &StepOracleConfig,
    ) -> Result<Self> {
        match flux.as_quadratic() {
            Some((linear, curvature)) => Ok(StepSolution::ClosedForm {
                nu_minus,
                nu_plus,
                linear,
                curvature,
            }),
            None => Self::from_oracle(flux, nu_minus, nu_plus, cfg),
        }
    }

    pub fn from_oracle(
        flux: &FluxModel,
        nu_minus: f64,
        nu_plus: f64,
        cfg: &StepOracleConfig,
    ) -> Result<Self> {
        if !(cfg.theta_max > 0.0)
            || !(cfg.h_min > 0.0)
            || !(cfg.h_max >= cfg.h_min)
            || !(cfg.slice_dt > 0.0)
        {
            return Err(invalid(
                "step oracle config",
                "theta_max, h_min, slice_dt must be positive and h_max >= h_min",
            ));
        }
        let half_width = 40.0 + 4.0 * nu_minus.abs().max(nu_plus.abs()) * cfg.theta_max;
        let nx = ((2.0 * half_width / cfg.h_max).ceil() as usize).max(64) + 200;
        let nt = (cfg.theta_max / cfg.slice_dt).ceil() as usize + 1;
        let grid = GridSpec::uniform(-half_width, half_width, nx, 0.0, cfg.theta_max, nt)
            .with_substeps(cfg.substeps.max(1))
            .with_refinement(0.0, cfg.h_min);
        let h = cfg.h_min;
        let q = move |eta: f64| {
            if eta <= -0.5 * h {
                nu_minus
            } else if eta >= 0.5 * h {
                nu_plus
            } else {
                nu_minus + (nu_plus - nu_minus) * (eta / h + 0.5)
            }
        };
        let run = oracle::solve(flux, &q, 1.0, &grid, Boundary::FarField)?;
        Ok(StepSolution::Sampled {
            nu_minus,
            nu_plus,
            field: Arc::new(run.field),
        })
    }

    pub fn limits(&self) -> (f64, f64) {
        match *self {
            StepSolution::ClosedForm {
                nu_minus, nu_plus, ..
            }
            | StepSolution::Sampled {
                nu_minus, nu_plus, ..
            } => (nu_minus, nu_plus),
        }
    }

    pub fn eval(&self, eta: f64, theta: f64) -> Result<f64> {
        if !(theta > 0.0) {
            return Err(invalid("theta", format!("must be positive, got {theta}")));
        }
        match self {
            StepSolution::ClosedForm {
                nu_minus,
                nu_plus,
                linear,
                curvature,
            } => {
                // v = linear + curvature·u solves the unit Burgers equation
                let v = burgers_step(
                    eta,
                    theta,
                    linear + curvature * nu_minus,
                    linear + curvature * nu_plus,
                );
                Ok((v - linear) / curvature)
            }
            StepSolution::Sampled { field, .. } => field
                .interpolate(eta, theta)
                .ok_or(Error::OutOfDomain { eta, theta }),
        }
    }

    /// Like [`eval`](Self::eval) but continues a sampled solution by its
    /// far-field constants beyond the cached `η` range.
    fn eval_extended(&self, eta: f64, theta: f64) -> Result<f64> {
        if let StepSolution::Sampled {
            field,
            nu_minus,
            nu_plus,
        } = self
        {
            if eta < field.x[0] {
                return Ok(*nu_minus);
            }
            if eta > field.x[field.nx() - 1] {
                return Ok(*nu_plus);
            }
        }
        self.eval(eta, theta)
    }

    /// Propagation speed of the step, `[φ]/[u]`.
    fn shock_speed(&self, flux: &FluxModel) -> f64 {
        let (a, b) = self.limits();
        (flux.phi(a) - flux.phi(b)) / (a - b)
    }
}

#[derive(Clone)]
pub struct InitialLayerProblem {
    pub profile: Arc<dyn InitialProfile>,
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub rho: f64,
    pub eps: f64,
    pub flux: FluxModel,
    pub step: StepSolution,
}

impl std::fmt::Debug for InitialLayerProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InitialLayerProblem")
            .field("nu_minus", &self.nu_minus)
            .field("nu_plus", &self.nu_plus)
            .field("rho", &self.rho)
            .field("eps", &self.eps)
            .field("flux", &self.flux.id())
            .finish()
    }
}

impl InitialLayerProblem {
    pub fn new(
        profile: Arc<dyn InitialProfile>,
        rho: f64,
        eps: f64,
        flux: FluxModel,
    ) -> Result<Self> {
        Self::with_step_config(profile, rho, eps, flux, &StepOracleConfig::default())
    }

    pub fn with_step_config(
        profile: Arc<dyn InitialProfile>,
        rho: f64,
        eps: f64,
        flux: FluxModel,
        cfg: &StepOracleConfig,
    ) -> Result<Self> {
        let (nu_minus, nu_plus) = profile.limits();
        if !(nu_minus > nu_plus) {
            return Err(invalid(
                "profile",
                format!(
                    "requires nu_minus > nu_plus, got nu_minus = {nu_minus}, nu_plus = {nu_plus}"
                ),
            ));
        }
        if !(rho > 0.0) || !(eps > 0.0) {
            return Err(invalid("rho/eps", "both must be positive"));
        }
        if !(rho / eps < 1.0) {
            return Err(invalid(
                "mu_ratio",
                format!("rho/eps = {} must be below 1", rho / eps),
            ));
        }
        let step = StepSolution::for_flux(&flux, nu_minus, nu_plus, cfg)?;
        Ok(Self {
            profile,
            nu_minus,
            nu_plus,
            rho,
            eps,
            flux,
            step,
        })
    }

    /// Same profile and flux at another `(ρ, ε)`, sharing the cached `Γ`.
    pub fn rescaled(&self, rho: f64, eps: f64) -> Result<Self> {
        if !(rho > 0.0) || !(eps > 0.0) || !(rho / eps < 1.0) {
            return Err(invalid("rho/eps", "both must be positive with rho/eps < 1"));
        }
        Ok(Self {
            rho,
            eps,
            ..self.clone()
        })
    }

    pub fn mu_ratio(&self) -> f64 {
        self.rho / self.eps
    }

    pub fn initial_value(&self, x: f64) -> f64 {
        self.profile.value(x / self.rho)
    }
}

/// `Γ(η, θ)`.
pub fn gamma_step(eta: f64, theta: f64, prob: &InitialLayerProblem) -> Result<f64> {
    prob.step.eval(eta, theta)
}

/// `h₀(x/ρ, εt/ρ²) - R₀,₀,₀(x/(2√(εt))) + Γ(x/ε, t/ε)`.
pub fn composite_solution(x: f64, t: f64, prob: &InitialLayerProblem) -> Result<f64> {
    if t < 0.0 {
        return Err(invalid("t", format!("must be non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(prob.initial_value(x));
    }
    let (rho, eps) = (prob.rho, prob.eps);
    let profile = &prob.profile;
    let h0 = heat_convolution_with_breaks(
        x / rho,
        eps * t / (rho * rho),
        &|s| profile.value(s),
        &profile.features(),
    )?;
    let r = r000(x / (2.0 * (eps * t).sqrt()), prob.nu_minus, prob.nu_plus);
    let gamma = gamma_step(x / eps, t / eps, prob)?;
    Ok(h0 - r + gamma)
}

/// `1/(ν₀⁺ - ν₀⁻) ∫ Γ((x - ρs)/ε, t/ε) ν'(s) ds`, with `ν'` truncated where it
/// drops below `1e-14` of its peak.
pub fn renormalized_solution(x: f64, t: f64, prob: &InitialLayerProblem) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    let jump = prob.nu_plus - prob.nu_minus;
    if jump == 0.0 {
        return Err(invalid("profile", "nu_plus must differ from nu_minus"));
    }
    let (rho, eps) = (prob.rho, prob.eps);
    let theta = t / eps;
    let (lo, hi) = prob.profile.derivative_support(1e-14);
    let shock = (x - eps * prob.step.shock_speed(&prob.flux) * theta) / rho;
    let mut breaks = vec![lo, hi];
    breaks.extend(
        prob.profile
            .features()
            .into_iter()
            .chain([shock])
            .filter(|&s| s > lo && s < hi),
    );
    breaks.sort_by(f64::total_cmp);
    let mut failure = None;
    let integral = integrate_with_breaks(
        |s| match prob.step.eval_extended((x - rho * s) / eps, theta) {
            Ok(g) => g * prob.profile.derivative(s),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        &breaks,
        QuadOptions {
            rel_tol: 1e-11,
            ..QuadOptions::default()
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(integral.value / jump)
}
