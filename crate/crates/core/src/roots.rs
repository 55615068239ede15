//! Real roots of the odd trinomial `x^m - β x + γ`, `m = 2n + 1 ≥ 3`.
//!
//! The trinomial is monotone on at most three intervals separated by the
//! critical points `±(β/m)^{1/(m-1)}` (only when `β > 0`), so every real root
//! is isolated by a sign change on a monotone piece and refined by
//! safeguarded Newton iteration.

#[derive(Debug, Clone, Copy)]
pub(crate) struct OddTrinomial {
    pub degree: u32,
    pub beta: f64,
    pub gamma: f64,
}

impl OddTrinomial {
    pub fn new(degree: u32, beta: f64, gamma: f64) -> Self {
        debug_assert!(degree >= 3 && degree % 2 == 1);
        Self {
            degree,
            beta,
            gamma,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        x.powi(self.degree as i32) - self.beta * x + self.gamma
    }

    fn deriv(&self, x: f64) -> f64 {
        self.degree as f64 * x.powi(self.degree as i32 - 1) - self.beta
    }

    /// Interval `[-B, B]` containing every real root.
    fn bound(&self) -> f64 {
        let m = self.degree as f64;
        let mut b = 1.0
            + 2.0 * self.beta.abs().powf(1.0 / (m - 1.0))
            + 2.0 * self.gamma.abs().powf(1.0 / m);
        while self.eval(b) <= 0.0 || self.eval(-b) >= 0.0 {
            b *= 2.0;
        }
        b
    }

    /// All real roots in increasing order. A double root at a critical point
    /// (the caustic) is listed twice, so the count is always odd.
    pub fn real_roots(&self) -> Vec<f64> {
        let bound = self.bound();
        let mut knots = vec![-bound];
        if self.beta > 0.0 {
            let xc = (self.beta / self.degree as f64).powf(1.0 / (self.degree as f64 - 1.0));
            knots.extend([-xc, xc]);
        }
        knots.push(bound);

        let mut roots = Vec::with_capacity(3);
        for (i, w) in knots.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if i > 0 && fa == 0.0 {
                roots.extend([a, a]);
            }
            if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
                roots.push(self.refine(a, b, fa));
            }
        }
        roots
    }

    /// Newton with bisection fallback on a bracket with a sign change.
    fn refine(&self, mut a: f64, mut b: f64, fa: f64) -> f64 {
        let rising = fa < 0.0;
        let mut x = 0.5 * (a + b);
        for _ in 0..200 {
            let fx = self.eval(x);
            if fx == 0.0 {
                return x;
            }
            if (fx < 0.0) == rising {
                a = x;
            } else {
                b = x;
            }
            let d = self.deriv(x);
            let newton = x - fx / d;
            let next = if d != 0.0 && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            if next == x || b - a <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                return next;
            }
            x = next;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_roots_of_cubic() {
        let r = OddTrinomial::new(3, 1.0, 0.0).real_roots();
        assert_eq!(r.len(), 3);
        assert!((r[0] + 1.0).abs() < 1e-15 && r[1].abs() < 1e-15 && (r[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_root_when_beta_nonpositive() {
        let r = OddTrinomial::new(5, -2.0, 7.0).real_roots();
        assert_eq!(r.len(), 1);
        assert!(OddTrinomial::new(5, -2.0, 7.0).eval(r[0]).abs() < 1e-12);
    }

    #[test]
    fn double_root_on_caustic() {
        // x³ - 3x + 2 = (x - 1)²(x + 2)
        let r = OddTrinomial::new(3, 3.0, 2.0).real_roots();
        assert_eq!(r.len(), 3);
        assert!((r[0] + 2.0).abs() < 1e-14);
        assert_eq!(&r[1..], &[1.0, 1.0]);
    }
}
