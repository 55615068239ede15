//! Inner solutions in Cole-Hopf form.
//!
//! `w₁,₀(ξ, τ) = -2 Λ_ξ / (φ''(0) Λ)` with `Λ = ∫ exp(-2s⁴ + τs² - ξs) ds`, and
//! its `A_{2n+1}` generalization
//! `u_in = -2ε V_x / (φ''(0) V)`, `V = ∫ exp(-a s^{2n+2} + t s²/ε^μ - x s/ε^σ) ds`.
//!
//! Writing `⟨·⟩` for the average against `e^{p(s)}`, differentiation under
//! the integral gives `u = (2ε^{1-σ}/φ'') ⟨s⟩` and
//!
//! * `u_x  = -(2ε^{1-2σ}/φ'') Var(s)`
//! * `u_xx =  (2ε^{1-3σ}/φ'') κ₃(s)`
//! * `u_t  =  (2ε^{1-σ-μ}/φ'') (κ₃ + 2⟨s⟩ Var(s))`
//!
//! so no derivative is ever taken numerically.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::fold::phase_coefficient;
use crate::specfun::{Phase, PhaseMoments, ScaledValue};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScalingExponents {
    pub n: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub sigma: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub mu: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub kappa: Rational,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exponents of `x = η ε^σ`, `t = θ ε^μ`, `u ~ ε^ϰ`.
pub fn scaling_exponents(n: u32) -> Result<ScalingExponents> {
    if n == 0 {
        return Err(invalid("n", "singularity index must be at least 1"));
    }
    let n = n as i64;
    Ok(ScalingExponents {
        n: n as u32,
        sigma: Rational::new(2 * n + 1, 2 * n + 2),
        mu: Rational::new(n, n + 1),
        kappa: Rational::new(1, 2 * n + 2),
    })
}

impl ScalingExponents {
    /// `-μ = ϰ - σ = 1 - 2σ` and `σ = ϰ + μ = (2n+1)ϰ`.
    pub fn balance_holds(&self) -> bool {
        let one = Rational::from_integer(1);
        let two = Rational::from_integer(2);
        let odd = Rational::from_integer(2 * self.n as i64 + 1);
        -self.mu == self.kappa - self.sigma
            && self.kappa - self.sigma == one - two * self.sigma
            && self.sigma == self.kappa + self.mu
            && self.kappa + self.mu == odd * self.kappa
    }

    pub fn sigma_f64(&self) -> f64 {
        ratio_f64(self.sigma)
    }

    pub fn mu_f64(&self) -> f64 {
        ratio_f64(self.mu)
    }

    pub fn kappa_f64(&self) -> f64 {
        ratio_f64(self.kappa)
    }
}

/// A point `(x, t)` of physical space-time at viscosity `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerPoint {
    pub x: f64,
    pub t: f64,
    pub eps: f64,
}

impl InnerPoint {
    pub fn new(x: f64, t: f64, eps: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(invalid("eps", format!("must be positive, got {eps}")));
        }
        if !x.is_finite() || !t.is_finite() {
            return Err(invalid("point", "x and t must be finite"));
        }
        Ok(Self { x, t, eps })
    }
}

/// `u_in` with its first and second space derivatives and time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerJet {
    pub u: f64,
    pub u_x: f64,
    pub u_t: f64,
    pub u_xx: f64,
}

fn check_phi2(phi2: f64) -> Result<()> {
    if phi2 > 0.0 && phi2.is_finite() {
        Ok(())
    } else {
        Err(invalid("phi2", format!("must be positive, got {phi2}")))
    }
}

/// The phase of `V` at a physical point.
pub fn inner_phase(p: &InnerPoint, n: u32) -> Result<Phase> {
    let ex = scaling_exponents(n)?;
    Phase::new(
        n,
        phase_coefficient(n),
        p.t / p.eps.powf(ex.mu_f64()),
        p.x / p.eps.powf(ex.sigma_f64()),
    )
}

/// `w₁,₀(ξ, τ)`, the leading inner term near the fold.
pub fn w10(xi: f64, tau: f64, phi2: f64) -> Result<f64> {
    check_phi2(phi2)?;
    let m = PhaseMoments::about_max(&Phase::new(1, 2.0, tau, xi)?, 1);
    Ok(2.0 / phi2 * m.mean())
}

/// `u_in(x, t, ε)` for the `A_{2n+1}` singularity.
pub fn u_inner(p: &InnerPoint, n: u32, phi2: f64) -> Result<f64> {
    check_phi2(phi2)?;
    let ex = scaling_exponents(n)?;
    let m = PhaseMoments::about_max(&inner_phase(p, n)?, 1);
    Ok(2.0 * p.eps.powf(1.0 - ex.sigma_f64()) / phi2 * m.mean())
}

/// `u_in` and its derivatives from a single moment evaluation.
pub fn u_inner_jet(p: &InnerPoint, n: u32, phi2: f64) -> Result<InnerJet> {
    check_phi2(phi2)?;
    let ex = scaling_exponents(n)?;
    let (sigma, mu) = (ex.sigma_f64(), ex.mu_f64());
    let m = PhaseMoments::about_max(&inner_phase(p, n)?, 3);
    let mean = m.mean();
    let var = m.central(2);
    let k3 = m.central(3);
    let e = p.eps;
    let amp = 2.0 / phi2;
    Ok(InnerJet {
        u: amp * e.powf(1.0 - sigma) * mean,
        u_x: -amp * e.powf(1.0 - 2.0 * sigma) * var,
        u_t: amp * e.powf(1.0 - sigma - mu) * (k3 + 2.0 * mean * var),
        u_xx: amp * e.powf(1.0 - 3.0 * sigma) * k3,
    })
}

pub fn u_inner_x(p: &InnerPoint, n: u32, phi2: f64) -> Result<f64> {
    Ok(u_inner_jet(p, n, phi2)?.u_x)
}

pub fn u_inner_t(p: &InnerPoint, n: u32, phi2: f64) -> Result<f64> {
    Ok(u_inner_jet(p, n, phi2)?.u_t)
}

/// `V` and its derivatives as scaled moment expressions:
/// `V_x = -ε^{-σ} M₁`, `V_xx = ε^{-2σ} M₂`, `V_t = ε^{-μ} M₂`.
#[derive(Debug, Clone, Copy)]
pub struct HeatDerivatives {
    pub v: ScaledValue,
    pub v_x: ScaledValue,
    pub v_xx: ScaledValue,
    pub v_t: ScaledValue,
}

pub fn heat_derivatives(p: &InnerPoint, n: u32) -> Result<HeatDerivatives> {
    let ex = scaling_exponents(n)?;
    let m = PhaseMoments::raw(&inner_phase(p, n)?, 2);
    let e = p.eps;
    Ok(HeatDerivatives {
        v: m.raw_moment(0),
        v_x: m.raw_moment(1).scale(-e.powf(-ex.sigma_f64())),
        v_xx: m.raw_moment(2).scale(e.powf(-2.0 * ex.sigma_f64())),
        v_t: m.raw_moment(2).scale(e.powf(-ex.mu_f64())),
    })
}
