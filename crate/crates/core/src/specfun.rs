//! Special functions of the asymptotic formulas.
//!
//! NOTE: [`erfc_half`] is *half* the conventional complementary error
//! function, `(1/√π) ∫_z^∞ e^{-y²} dy`, so that `erfc_half(z) + erfc_half(-z) = 1`.
//! Every formula in this crate that mentions erfc uses this normalization.
//!
//! Phase integrals `∫ s^k exp(-a s^{2n+2} + b s² - c s) ds` are returned in
//! scaled form (`mantissa · e^{log_scale}`) with `log_scale` the maximum of
//! the exponent, so they never overflow for large `|b|`, `|c|`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::quad::{composite_gauss_legendre, integrate_vec, integrate_with_breaks, QuadOptions};
use crate::roots::OddTrinomial;

/// Exponent drop below the maximum at which the integrand is truncated.
const TRUNCATION_DEPTH: f64 = 45.0;

/// `(1/√π) ∫_z^∞ e^{-y²} dy`, i.e. half the conventional `erfc`.
pub fn erfc_half(z: f64) -> f64 {
    0.5 * libm::erfc(z)
}

/// `ln erfc_half(z)`, finite for all finite `z`.
pub fn ln_erfc_half(z: f64) -> f64 {
    if z < 25.0 {
        erfc_half(z).ln()
    } else {
        ln_erfc_half_asymptotic(z)
    }
}

fn ln_erfc_half_asymptotic(z: f64) -> f64 {
    // erfc(z) = e^{-z²}/(z√π) · (1 - 1/(2z²) + 3/(4z⁴) - 15/(8z⁶) + 105/(16z⁸) - 945/(32z¹⁰))
    let w = 1.0 / (2.0 * z * z);
    let series = 1.0 - w * (1.0 - 3.0 * w * (1.0 - 5.0 * w * (1.0 - 7.0 * w * (1.0 - 9.0 * w))));
    -z * z - (2.0 * z * PI.sqrt()).ln() + series.ln()
}

/// `R₀,₀,₀(z) = ν₀⁻ erfc(z) + ν₀⁺ erfc(-z)`: heat evolution of step data in
/// the similarity variable `z = x / (2√(εt))`.
pub fn r000(z: f64, nu_minus: f64, nu_plus: f64) -> f64 {
    nu_minus * erfc_half(z) + nu_plus * erfc_half(-z)
}

/// `h₀(σ, ω) = 1/(2√(πω)) ∫ ν(s) exp[-(σ - s)²/(4ω)] ds`.
pub fn heat_convolution(sigma: f64, omega: f64, nu: &dyn Fn(f64) -> f64) -> Result<f64> {
    heat_convolution_with_breaks(sigma, omega, nu, &[])
}

/// [`heat_convolution`] with known feature locations of `ν` (in `s`) used as
/// quadrature breakpoints.
///
/// The Gaussian is integrated over `|s - σ| ≤ 20√ω`; outside, `ν` is replaced
/// by its value at the cut, which changes the result by at most
/// `2 sup|ν| erfc_half(10) < 1e-44 sup|ν|`.
pub fn heat_convolution_with_breaks(
    sigma: f64,
    omega: f64,
    nu: &dyn Fn(f64) -> f64,
    breaks: &[f64],
) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(invalid("omega", format!("must be positive, got {omega}")));
    }
    const HALF_WIDTH: f64 = 10.0;
    let scale = 2.0 * omega.sqrt();
    // s = σ + 2√ω y, kernel e^{-y²}/√π
    let mut ys = vec![-HALF_WIDTH, HALF_WIDTH];
    ys.extend(
        breaks
            .iter()
            .map(|&s| (s - sigma) / scale)
            .filter(|y| y.abs() < HALF_WIDTH),
    );
    ys.sort_by(f64::total_cmp);
    let core = integrate_with_breaks(
        |y| nu(sigma + scale * y) * (-y * y).exp(),
        &ys,
        QuadOptions::default(),
    )
    .value
        / PI.sqrt();
    let tail_mass = erfc_half(HALF_WIDTH);
    let tails = tail_mass * (nu(sigma - scale * HALF_WIDTH) + nu(sigma + scale * HALF_WIDTH));
    Ok(core + tails)
}

/// A value `mantissa · e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub log_scale: f64,
    pub mantissa: f64,
}

impl ScaledValue {
    pub fn new(log_scale: f64, mantissa: f64) -> Self {
        Self {
            log_scale,
            mantissa,
        }
    }

    /// The plain value; may overflow to infinity or underflow to zero.
    pub fn value(&self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }

    /// `ln |value|`.
    pub fn ln_abs(&self) -> f64 {
        self.log_scale + self.mantissa.abs().ln()
    }

    /// `self / other`, formed without exponentiating either scale on its own.
    pub fn ratio(&self, other: &ScaledValue) -> f64 {
        self.mantissa / other.mantissa * (self.log_scale - other.log_scale).exp()
    }

    pub fn scale(&self, factor: f64) -> ScaledValue {
        ScaledValue::new(self.log_scale, self.mantissa * factor)
    }
}

/// Parameters of `∫ s^k exp(-a s^{2n+2} + b s² - c s) ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseIntegralSpec {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub moment: u32,
}

impl PhaseIntegralSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n", "singularity index must be at least 1"));
        }
        if !(self.a > 0.0) {
            return Err(Error::Divergent(self.a));
        }
        if !self.a.is_finite() || !self.b.is_finite() || !self.c.is_finite() {
            return Err(invalid("spec", "coefficients must be finite"));
        }
        Ok(())
    }

    pub fn phase(&self) -> Phase {
        Phase {
            n: self.n,
            a: self.a,
            b: self.b,
            c: self.c,
        }
    }
}

/// The exponent `p(s) = -a s^{2n+2} + b s² - c s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Phase {
    pub fn new(n: u32, a: f64, b: f64, c: f64) -> Result<Self> {
        PhaseIntegralSpec {
            n,
            a,
            b,
            c,
            moment: 0,
        }
        .validate()?;
        Ok(Self { n, a, b, c })
    }

    pub fn eval(&self, s: f64) -> f64 {
        let s2 = s * s;
        -self.a * s2.powi(self.n as i32 + 1) + self.b * s2 - self.c * s
    }

    pub fn derivative(&self, s: f64) -> f64 {
        let m = 2 * self.n + 2;
        -(m as f64) * self.a * s.powi(m as i32 - 1) + 2.0 * self.b * s - self.c
    }

    /// Real solutions of `p'(s) = 0` in increasing order.
    pub fn critical_points(&self) -> Vec<f64> {
        let lead = (2 * self.n + 2) as f64 * self.a;
        OddTrinomial::new(2 * self.n + 1, 2.0 * self.b / lead, self.c / lead).real_roots()
    }

    /// Global maximizer of `p`; on a tie the leftmost maximizer.
    pub fn global_max(&self) -> (f64, f64) {
        self.critical_points()
            .into_iter()
            .map(|s| (s, self.eval(s)))
            .fold((f64::NAN, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            })
    }

    /// Interval outside of which `p(s) - p_max < -depth`.
    fn support(&self, crit: &[f64], p_max: f64, depth: f64) -> (f64, f64) {
        let lo = crit[0];
        let hi = crit[crit.len() - 1];
        let below = |s: f64| self.eval(s) - p_max < -depth;
        let outward = |start: f64, dir: f64| {
            let mut step = 0.25 * (1.0 + (hi - lo));
            let mut inner = start;
            let mut outer = start + dir * step;
            while !below(outer) {
                inner = outer;
                step *= 2.0;
                outer = start + dir * step;
            }
            for _ in 0..80 {
                let mid = 0.5 * (inner + outer);
                if below(mid) {
                    outer = mid;
                } else {
                    inner = mid;
                }
            }
            outer
        };
        (outward(lo, -1.0), outward(hi, 1.0))
    }
}

/// Moments `∫ (s - center)^j e^{p(s) - p_max} ds`, `j = 0..=max_order`,
/// together with `log_scale = p_max`.
#[derive(Debug, Clone)]
pub struct PhaseMoments {
    pub log_scale: f64,
    pub center: f64,
    pub shifted: Vec<f64>,
    pub converged: bool,
}

impl PhaseMoments {
    /// Moments about the global maximizer of the phase, which keeps the
    /// central moments free of cancellation when the mass is concentrated.
    pub fn about_max(phase: &Phase, max_order: usize) -> Self {
        Self::compute(phase, max_order, None)
    }

    /// Moments about the origin (raw moments).
    pub fn raw(phase: &Phase, max_order: usize) -> Self {
        Self::compute(phase, max_order, Some(0.0))
    }

    fn compute(phase: &Phase, max_order: usize, center: Option<f64>) -> Self {
        let crit = phase.critical_points();
        let (s_max, p_max) = phase.global_max();
        let center = center.unwrap_or(s_max);
        let (lo, hi) = phase.support(&crit, p_max, TRUNCATION_DEPTH);
        let mut breaks: Vec<f64> = (0..=8).map(|i| lo + (hi - lo) * i as f64 / 8.0).collect();
        breaks.extend(crit.iter().copied().filter(|&s| s > lo && s < hi));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let dim = max_order + 1;
        let r = integrate_vec(
            |s, out: &mut [f64]| {
                let w = (phase.eval(s) - p_max).exp();
                let d = s - center;
                let mut acc = w;
                for slot in out.iter_mut() {
                    *slot = acc;
                    acc *= d;
                }
            },
            dim,
            &breaks,
            QuadOptions::default(),
        );
        Self {
            log_scale: p_max,
            center,
            shifted: r.values,
            converged: r.converged,
        }
    }

    pub fn max_order(&self) -> usize {
        self.shifted.len() - 1
    }

    pub fn mass(&self) -> ScaledValue {
        ScaledValue::new(self.log_scale, self.shifted[0])
    }

    /// `∫ s e^p / ∫ e^p`.
    pub fn mean(&self) -> f64 {
        self.center + self.shifted[1] / self.shifted[0]
    }

    /// Central moment `∫ (s - mean)^k e^p / ∫ e^p`.
    pub fn central(&self, k: usize) -> f64 {
        assert!(k <= self.max_order(), "moment order {k} not computed");
        let d = self.shifted[1] / self.shifted[0];
        let mut binom = 1.0;
        let mut total = 0.0;
        for j in 0..=k {
            let term = self.shifted[j] / self.shifted[0] * (-d).powi((k - j) as i32);
            total += binom * term;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        total
    }

    /// Raw moment `∫ s^k e^{p(s)} ds` in scaled form.
    pub fn raw_moment(&self, k: usize) -> ScaledValue {
        assert!(k <= self.max_order(), "moment order {k} not computed");
        let mut binom = 1.0;
        let mut total = 0.0;
        for j in 0..=k {
            total += binom * self.shifted[j] * self.center.powi((k - j) as i32);
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        ScaledValue::new(self.log_scale, total)
    }
}

/// `∫ s^k exp(-a s^{2n+2} + b s² - c s) ds` by adaptive Gauss-Kronrod
/// quadrature on the support where the exponent is within 45 of its maximum.
pub fn phase_integral(spec: &PhaseIntegralSpec) -> Result<ScaledValue> {
    spec.validate()?;
    let m = PhaseMoments::raw(&spec.phase(), spec.moment as usize);
    Ok(ScaledValue::new(
        m.log_scale,
        m.shifted[spec.moment as usize],
    ))
}

/// The same integral by a composite Gauss-Legendre rule on the same truncated
/// support; an independent check of [`phase_integral`].
pub fn phase_integral_fixed(
    spec: &PhaseIntegralSpec,
    panels: usize,
    order: usize,
) -> Result<ScaledValue> {
    spec.validate()?;
    let phase = spec.phase();
    let crit = phase.critical_points();
    let (_, p_max) = phase.global_max();
    let (lo, hi) = phase.support(&crit, p_max, TRUNCATION_DEPTH);
    let k = spec.moment as i32;
    let v = composite_gauss_legendre(
        |s| s.powi(k) * (phase.eval(s) - p_max).exp(),
        lo,
        hi,
        panels,
        order,
    );
    Ok(ScaledValue::new(p_max, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    #[test]
    fn erfc_half_basics() {
        assert_eq!(erfc_half(0.0), 0.5);
        for z in [-3.0, -0.7, 0.2, 1.0, 4.5] {
            assert!((erfc_half(z) + erfc_half(-z) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn erfc_half_matches_defining_integral() {
        for z in [-2.0, 0.0, 0.5, 1.0, 3.0] {
            let q = integrate(|y: f64| (-y * y).exp(), z, 12.0, QuadOptions::default()).value
                / PI.sqrt();
            assert!((erfc_half(z) - q).abs() < 1e-15, "z={z}");
        }
        // half the conventional erfc(1) = 0.157299207050285...
        assert!((erfc_half(1.0) - 0.078_649_603_525_142_5).abs() < 1e-15);
    }

    #[test]
    fn ln_erfc_is_continuous_across_branch() {
        for z in [20.0, 25.0, 26.0] {
            let direct = erfc_half(z).ln();
            assert!(
                (direct - ln_erfc_half_asymptotic(z)).abs() < 1e-13 * direct.abs(),
                "z={z}"
            );
        }
        assert!(ln_erfc_half(1e3).is_finite());
        assert!((ln_erfc_half(-40.0)).abs() < 1e-300);
    }

    #[test]
    fn r000_limits() {
        assert_eq!(r000(0.0, 3.0, -1.0), 1.0);
        assert!((r000(8.0, 1.0, -1.0) + 1.0).abs() < 1e-12);
        assert!((r000(-8.0, 1.0, -1.0) - 1.0).abs() < 1e-12);
        assert!((r000(1.0, 1.0, 0.0) - erfc_half(1.0)).abs() < 1e-16);
    }

    #[test]
    fn heat_convolution_rejects_bad_omega() {
        assert!(heat_convolution(0.0, 0.0, &|_| 1.0).is_err());
        assert!(heat_convolution(0.0, -1.0, &|_| 1.0).is_err());
    }

    #[test]
    fn heat_convolution_identities() {
        let c = heat_convolution(0.3, 2.0, &|_| 1.7).unwrap();
        assert!((c - 1.7).abs() < 1e-14);
        let m = heat_convolution(-1.3, 0.4, &|s| s).unwrap();
        assert!((m + 1.3).abs() < 1e-13);
        let step = |s: f64| if s < 0.0 { 1.0 } else { -1.0 };
        for (sigma, omega) in [(0.5, 0.2), (-2.0, 3.0), (0.0, 1.0)] {
            let h = heat_convolution_with_breaks(sigma, omega, &step, &[0.0]).unwrap();
            let z = sigma / (2.0 * f64::sqrt(omega));
            assert!((h - r000(z, 1.0, -1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn pearcey_at_origin() {
        // ∫ e^{-2s⁴} ds = 2 Γ(5/4) 2^{-1/4}
        let v = phase_integral(&PhaseIntegralSpec {
            n: 1,
            a: 2.0,
            b: 0.0,
            c: 0.0,
            moment: 0,
        })
        .unwrap();
        let expected = 2.0 * 0.906_402_477_055_477 * 2f64.powf(-0.25);
        assert!((v.value() - expected).abs() < 1e-13);
        assert!((v.value() - 1.524_381_187_466_076).abs() < 1e-13);
    }

    #[test]
    fn rejects_divergent_spec() {
        let spec = PhaseIntegralSpec {
            n: 1,
            a: 0.0,
            b: 0.0,
            c: 0.0,
            moment: 0,
        };
        assert!(matches!(phase_integral(&spec), Err(Error::Divergent(_))));
        let spec = PhaseIntegralSpec {
            n: 1,
            a: -1.0,
            b: 0.0,
            c: 0.0,
            moment: 0,
        };
        assert!(phase_integral(&spec).is_err());
    }

    #[test]
    fn huge_parameters_do_not_overflow() {
        let spec = PhaseIntegralSpec {
            n: 1,
            a: 2.0,
            b: 900.0,
            c: -400.0,
            moment: 0,
        };
        let v = phase_integral(&spec).unwrap();
        assert!(v.value().is_infinite());
        assert!(v.mantissa > 0.0 && v.mantissa.is_finite());
        assert!(v.log_scale > 700.0);
    }

    #[test]
    fn central_moments_of_gaussian_limit() {
        // large b with c = 0 pushes the mass to ±√(b/4a); moments about the max stay accurate
        let phase = Phase::new(1, 2.0, 40.0, 3.0).unwrap();
        let m = PhaseMoments::about_max(&phase, 3);
        let raw = PhaseMoments::raw(&phase, 3);
        let mean_raw = raw.shifted[1] / raw.shifted[0];
        assert!((m.mean() - mean_raw).abs() < 1e-12);
        let var_raw = raw.shifted[2] / raw.shifted[0] - mean_raw * mean_raw;
        assert!((m.central(2) - var_raw).abs() < 1e-10);
        assert!(m.central(2) > 0.0);
    }
}
