//! Outer (inviscid) root equations `U^{2n+1} - τU + ξ = 0`.
//!
//! The root equation is the critical-point equation of the phase
//! `p(s) = -a s^{2n+2} + τ s² - ξ s` with `a = 2^{2n}/(n+1)` under `U = 2s`.
//! The selected branch is the one carried by the global maximum of `p`,
//! i.e. the branch that dominates the Laplace asymptotics of the
//! Cole-Hopf integral.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::roots::OddTrinomial;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldQuery {
    pub xi: f64,
    pub tau: f64,
    pub n: u32,
}

impl FoldQuery {
    pub fn new(xi: f64, tau: f64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "singularity index must be at least 1"));
        }
        if !xi.is_finite() || !tau.is_finite() {
            return Err(invalid("query", "xi and tau must be finite"));
        }
        Ok(Self { xi, tau, n })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldResult {
    pub root: f64,
    pub all_real_roots: Vec<f64>,
    /// Two distinct global maximizers of the phase (`ξ = 0`, `τ > 0`).
    pub is_maxwell: bool,
}

/// Coefficient of `s^{2n+2}` fixed by matching with the outer expansion.
pub fn phase_coefficient(n: u32) -> f64 {
    4f64.powi(n as i32) / (n as f64 + 1.0)
}

/// Solves `U^{2n+1} - τU + ξ = 0` and selects the Laplace branch.
///
/// On the Maxwell set the negative outer root is returned and `is_maxwell`
/// is set; at `ξ = τ = 0` the root is `0`.
pub fn fold_root(q: &FoldQuery) -> FoldResult {
    let roots = OddTrinomial::new(2 * q.n + 1, q.tau, q.xi).real_roots();
    let is_maxwell = q.xi == 0.0 && q.tau > 0.0;
    let a = phase_coefficient(q.n);
    // phase at s = U/2
    let phase = |u: f64| {
        let s = 0.5 * u;
        -a * s.powi(2 * q.n as i32 + 2) + q.tau * s * s - q.xi * s
    };
    let root = if is_maxwell {
        roots[0]
    } else {
        roots
            .iter()
            .copied()
            .fold((f64::NAN, f64::NEG_INFINITY), |best, u| {
                let p = phase(u);
                if p > best.1 {
                    (u, p)
                } else {
                    best
                }
            })
            .0
    };
    FoldResult {
        root,
        all_real_roots: roots,
        is_maxwell,
    }
}

/// Leading outer term `U₀/φ''(0)` (the factor `ε^ϰ` is left to the caller).
pub fn outer_leading(q: &FoldQuery, phi2: f64) -> Result<f64> {
    if !(phi2 > 0.0) {
        return Err(invalid("phi2", format!("must be positive, got {phi2}")));
    }
    Ok(fold_root(q).root / phi2)
}
