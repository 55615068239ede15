//! Convex flux functions `φ(u)` for `u_t + φ(u)_x = ε u_xx`.
//!
//! Fluxes are polynomials in `u`. Only `φ''(0) > 0` is enforced at
//! construction: the cubic test flux `u²/2 + u³/6` is convex only for
//! `u > -1`, which covers every state the solvers visit.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FluxModel {
    id: String,
    /// `coeffs[k]` multiplies `u^k`.
    coeffs: Vec<f64>,
}

impl FluxModel {
    pub fn polynomial(id: impl Into<String>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("flux", "coefficients must be finite"));
        }
        let flux = Self {
            id: id.into(),
            coeffs,
        };
        if !(flux.phi2(0.0) > 0.0) {
            return Err(invalid(
                "flux",
                format!("phi''(0) must be positive, got {}", flux.phi2(0.0)),
            ));
        }
        Ok(flux)
    }

    /// `φ(u) = u²/2`.
    pub fn burgers() -> Self {
        Self::quadratic(1.0).expect("unit curvature is valid")
    }

    /// `φ(u) = curvature · u²/2`, the flux for which the Cole-Hopf solution is exact.
    pub fn quadratic(curvature: f64) -> Result<Self> {
        let id = if curvature == 1.0 {
            "burgers".to_string()
        } else {
            format!("quadratic({curvature})")
        };
        Self::polynomial(id, vec![0.0, 0.0, 0.5 * curvature])
    }

    /// `φ(u) = u²/2 + u³/6`: unit curvature at the origin plus a generic cubic term.
    pub fn cubic_perturbed() -> Self {
        Self::polynomial("cubic", vec![0.0, 0.0, 0.5, 1.0 / 6.0]).expect("valid flux")
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn phi(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    pub fn phi1(&self, u: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * u + k as f64 * c)
    }

    pub fn phi2(&self, u: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * u + (k * (k - 1)) as f64 * c)
    }

    /// `φ''(0)`, the curvature entering the Cole-Hopf formulas.
    pub fn curvature(&self) -> f64 {
        self.phi2(0.0)
    }

    /// Returns `(linear, curvature)` when `φ(u) = c₀ + linear·u + curvature·u²/2` exactly.
    pub fn as_quadratic(&self) -> Option<(f64, f64)> {
        if self.coeffs.iter().skip(3).all(|&c| c == 0.0) {
            let linear = self.coeffs.get(1).copied().unwrap_or(0.0);
            Some((linear, self.curvature()))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_cubic() {
        let f = FluxModel::cubic_perturbed();
        let u = 0.3;
        assert!((f.phi(u) - (u * u / 2.0 + u * u * u / 6.0)).abs() < 1e-15);
        assert!((f.phi1(u) - (u + u * u / 2.0)).abs() < 1e-15);
        assert!((f.phi2(u) - (1.0 + u)).abs() < 1e-15);
        assert_eq!(f.curvature(), 1.0);
        assert!(f.as_quadratic().is_none());
    }

    #[test]
    fn quadratic_detection() {
        let f = FluxModel::quadratic(2.5).unwrap();
        assert_eq!(f.as_quadratic(), Some((0.0, 2.5)));
        assert_eq!(FluxModel::burgers().id(), "burgers");
    }

    #[test]
    fn rejects_nonconvex_origin() {
        assert!(FluxModel::polynomial("bad", vec![0.0, 1.0, -0.5]).is_err());
        assert!(FluxModel::quadratic(0.0).is_err());
    }
}
