//! Reference solver for `u_t + φ(u)_x = ε u_xx`.
//!
//! Vertex-centred finite volumes on a (possibly sinh-graded) mesh, trapezoidal
//! time stepping, Dirichlet far-field values, and a damped Newton solve with a
//! tridiagonal analytic Jacobian per step. The interface flux is
//! `½(φ(u_l) + φ(u_r)) - ε(u_r - u_l)/Δx`, optionally with local Lax-Friedrichs
//! dissipation `½ α (u_r - u_l)`.

mod io;

pub use io::{read_binary, write_binary, write_csv};

use crate::error::{invalid, Error, Result};
use crate::flux::FluxModel;

/// Largest admissible ratio between adjacent cell widths.
pub const MAX_STRETCH: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub center: f64,
    pub h_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t0: f64,
    pub t_end: f64,
    /// Number of stored time slices, including `t0` and `t_end`.
    pub nt: usize,
    /// Time steps between consecutive stored slices.
    pub substeps: usize,
    pub refinement: Option<Refinement>,
}

impl GridSpec {
    pub fn uniform(x_min: f64, x_max: f64, nx: usize, t0: f64, t_end: f64, nt: usize) -> Self {
        Self {
            x_min,
            x_max,
            nx,
            t0,
            t_end,
            nt,
            substeps: 1,
            refinement: None,
        }
    }

    pub fn with_substeps(mut self, substeps: usize) -> Self {
        self.substeps = substeps;
        self
    }

    pub fn with_refinement(mut self, center: f64, h_min: f64) -> Self {
        self.refinement = Some(Refinement { center, h_min });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) {
            return Err(Error::InvalidGrid(format!(
                "x_min {} must be below x_max {}",
                self.x_min, self.x_max
            )));
        }
        if !(self.t0 < self.t_end) {
            return Err(Error::InvalidGrid(format!(
                "t0 {} must be below t_end {}",
                self.t0, self.t_end
            )));
        }
        if self.nx < 16 {
            return Err(Error::InvalidGrid(format!("nx = {} < 16", self.nx)));
        }
        if self.nt < 2 {
            return Err(Error::InvalidGrid(format!("nt = {} < 2", self.nt)));
        }
        if self.substeps == 0 {
            return Err(Error::InvalidGrid("substeps must be positive".into()));
        }
        if let Some(r) = self.refinement {
            if !(r.center > self.x_min && r.center < self.x_max) || !(r.h_min > 0.0) {
                return Err(Error::InvalidGrid(
                    "refinement centre must be interior and h_min positive".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t0) / ((self.nt - 1) * self.substeps) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let span = self.t_end - self.t0;
        (0..self.nt)
            .map(|k| {
                if k + 1 == self.nt {
                    self.t_end
                } else {
                    self.t0 + span * k as f64 / (self.nt - 1) as f64
                }
            })
            .collect()
    }

    /// Mesh nodes. With refinement the map is `x = c + A sinh(β(s - s_c))`
    /// on uniform `s ∈ [0, 1]`, with the spacing at `c` equal to `h_min`.
    pub fn nodes(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.nx;
        let ds = 1.0 / (n - 1) as f64;
        let uniform = |i: usize| {
            if i + 1 == n {
                self.x_max
            } else {
                self.x_min + (self.x_max - self.x_min) * i as f64 * ds
            }
        };
        let Some(r) = self.refinement else {
            return Ok((0..n).map(uniform).collect());
        };
        let (left, right) = (r.center - self.x_min, self.x_max - r.center);
        if r.h_min >= (self.x_max - self.x_min) * ds {
            return Ok((0..n).map(uniform).collect());
        }
        // g(β) = [asinh(left/A) + asinh(right/A)]/β - 1 with A = h_min/(β Δs)
        let g = |beta: f64| {
            let a = r.h_min / (beta * ds);
            ((left / a).asinh() + (right / a).asinh()) / beta - 1.0
        };
        let (mut lo, mut hi) = (1e-12, 1.0);
        while g(hi) > 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::InvalidGrid("cannot fit graded mesh".into()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let beta = 0.5 * (lo + hi);
        let a = r.h_min / (beta * ds);
        let s_c = (left / a).asinh() / beta;
        let mut x: Vec<f64> = (0..n)
            .map(|i| r.center + a * (beta * (i as f64 * ds - s_c)).sinh())
            .collect();
        x[0] = self.x_min;
        x[n - 1] = self.x_max;
        let stretch = x
            .windows(3)
            .map(|w| {
                let (h0, h1) = (w[1] - w[0], w[2] - w[1]);
                (h1 / h0).max(h0 / h1)
            })
            .fold(1.0, f64::max);
        if stretch > MAX_STRETCH {
            return Err(Error::InvalidGrid(format!(
                "adjacent cell ratio {stretch:.4} exceeds {MAX_STRETCH}; increase nx or h_min"
            )));
        }
        Ok(x)
    }
}

/// Values on a rectangular `(x, t)` grid, stored row-major by time slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn new(x: Vec<f64>, t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != x.len() * t.len() {
            return Err(invalid("values", "length must equal nt * nx"));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("grid", "coordinates must be strictly increasing"));
        }
        Ok(Self { x, t, values })
    }

    /// Samples `f(x, t)` on the given coordinates.
    pub fn from_fn(x: Vec<f64>, t: Vec<f64>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = t
            .iter()
            .flat_map(|&tk| x.iter().map(move |&xi| (xi, tk)))
            .map(|(xi, tk)| f(xi, tk))
            .collect();
        Self::new(x, t, values)
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn nt(&self) -> usize {
        self.t.len()
    }

    pub fn slice(&self, k: usize) -> &[f64] {
        &self.values[k * self.nx()..(k + 1) * self.nx()]
    }

    pub fn at(&self, k: usize, i: usize) -> f64 {
        self.values[k * self.nx() + i]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sub-grid of nodes with `x` and `t` inside the closed ranges.
    pub fn restrict(&self, x_range: (f64, f64), t_range: (f64, f64)) -> Result<SampledField> {
        let xi: Vec<usize> = (0..self.nx())
            .filter(|&i| self.x[i] >= x_range.0 && self.x[i] <= x_range.1)
            .collect();
        let tk: Vec<usize> = (0..self.nt())
            .filter(|&k| self.t[k] >= t_range.0 && self.t[k] <= t_range.1)
            .collect();
        if xi.is_empty() || tk.is_empty() {
            return Err(Error::InvalidGrid("restriction selects no nodes".into()));
        }
        let values = tk
            .iter()
            .flat_map(|&k| xi.iter().map(move |&i| (k, i)))
            .map(|(k, i)| self.at(k, i))
            .collect();
        Self::new(
            xi.iter().map(|&i| self.x[i]).collect(),
            tk.iter().map(|&k| self.t[k]).collect(),
            values,
        )
    }

    pub fn covers(&self, x: f64, t: f64) -> bool {
        x >= self.x[0] && x <= self.x[self.nx() - 1] && t >= self.t[0] && t <= self.t[self.nt() - 1]
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: f64, t: f64) -> Option<f64> {
        if !self.covers(x, t) {
            return None;
        }
        let (i, wx) = bracket(&self.x, x);
        let (k, wt) = bracket(&self.t, t);
        let row = |k: usize| {
            let r = self.slice(k);
            if wx == 0.0 {
                r[i]
            } else {
                (1.0 - wx) * r[i] + wx * r[i + 1]
            }
        };
        Some(if wt == 0.0 {
            row(k)
        } else {
            (1.0 - wt) * row(k) + wt * row(k + 1)
        })
    }
}

/// Index `i` and weight `w` with `v = (1-w) xs[i] + w xs[i+1]`.
fn bracket(xs: &[f64], v: f64) -> (usize, f64) {
    let n = xs.len();
    if n == 1 || v <= xs[0] {
        return (0, 0.0);
    }
    if v >= xs[n - 1] {
        return (n - 1, 0.0);
    }
    let i = xs.partition_point(|&x| x <= v) - 1;
    (i, (v - xs[i]) / (xs[i + 1] - xs[i]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Dirichlet values taken from the initial data at the domain ends.
    FarField,
    Dirichlet {
        left: f64,
        right: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxScheme {
    /// Centred flux; second order, monotone while the cell Péclet number stays below 2.
    Central,
    /// Centred flux plus local Lax-Friedrichs dissipation; first order, monotone.
    LocalLaxFriedrichs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub scheme: FluxScheme,
    /// Target for the step residual (in units of `u`).
    pub tol: f64,
    /// Residual accepted when Newton and Picard both stagnate.
    pub accept_tol: f64,
    pub max_newton: usize,
    pub max_picard: usize,
    /// Number of leading trapezoidal steps replaced by two backward-Euler
    /// half steps each, which damps the stiff modes of steep initial data.
    pub startup_steps: usize,
    /// Courant number above which a warning is recorded.
    pub courant_warning: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            scheme: FluxScheme::Central,
            tol: 1e-13,
            accept_tol: 1e-10,
            max_newton: 30,
            max_picard: 500,
            startup_steps: 2,
            courant_warning: 50.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveDiagnostics {
    pub steps: usize,
    pub newton_iterations: usize,
    pub picard_fallbacks: usize,
    pub max_step_residual: f64,
    pub max_courant: f64,
    pub max_peclet: f64,
    /// `max(0, max u - max q, min q - min u)` over the whole run.
    pub max_principle_violation: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub field: SampledField,
    pub diagnostics: SolveDiagnostics,
}

struct Stepper<'a> {
    flux: &'a FluxModel,
    eps: f64,
    x: Vec<f64>,
    /// control-volume widths
    h: Vec<f64>,
    /// interface spacings x[i+1] - x[i]
    dx: Vec<f64>,
    scheme: FluxScheme,
}

impl Stepper<'_> {
    fn interface_flux(&self, i: usize, l: f64, r: f64) -> f64 {
        let mut f = 0.5 * (self.flux.phi(l) + self.flux.phi(r)) - self.eps * (r - l) / self.dx[i];
        if self.scheme == FluxScheme::LocalLaxFriedrichs {
            let alpha = self.flux.phi1(l).abs().max(self.flux.phi1(r).abs());
            f -= 0.5 * alpha * (r - l);
        }
        f
    }

    /// Partial derivatives of the interface flux (α frozen).
    fn interface_jac(&self, i: usize, l: f64, r: f64) -> (f64, f64) {
        let d = self.eps / self.dx[i];
        let mut dl = 0.5 * self.flux.phi1(l) + d;
        let mut dr = 0.5 * self.flux.phi1(r) - d;
        if self.scheme == FluxScheme::LocalLaxFriedrichs {
            let alpha = self.flux.phi1(l).abs().max(self.flux.phi1(r).abs());
            dl += 0.5 * alpha;
            dr -= 0.5 * alpha;
        }
        (dl, dr)
    }

    /// Flux divergence `D_i = F_{i+½} - F_{i-½}` at interior nodes (zero at the ends).
    fn divergence(&self, u: &[f64], out: &mut [f64]) {
        let n = u.len();
        let mut left = self.interface_flux(0, u[0], u[1]);
        out[0] = 0.0;
        for i in 1..n - 1 {
            let right = self.interface_flux(i, u[i], u[i + 1]);
            out[i] = right - left;
            left = right;
        }
        out[n - 1] = 0.0;
    }

    /// Scaled residual `G_i Δt / h_i` of the θ-scheme step.
    #[allow(clippy::too_many_arguments)]
    fn residual(
        &self,
        u: &[f64],
        u_old: &[f64],
        d_old: &[f64],
        dt: f64,
        theta: f64,
        d_buf: &mut [f64],
        out: &mut [f64],
    ) -> f64 {
        self.divergence(u, d_buf);
        let n = u.len();
        let mut worst: f64 = 0.0;
        out[0] = 0.0;
        out[n - 1] = 0.0;
        for i in 1..n - 1 {
            let g =
                (u[i] - u_old[i]) + dt / self.h[i] * (theta * d_buf[i] + (1.0 - theta) * d_old[i]);
            out[i] = g;
            worst = worst.max(g.abs());
        }
        worst
    }

    fn step(
        &self,
        u_old: &[f64],
        dt: f64,
        theta: f64,
        opts: &SolverOptions,
        diag: &mut SolveDiagnostics,
    ) -> std::result::Result<Vec<f64>, f64> {
        let n = u_old.len();
        let mut d_old = vec![0.0; n];
        self.divergence(u_old, &mut d_old);
        let mut u = u_old.to_vec();
        let mut d_buf = vec![0.0; n];
        let mut g = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut g_trial = vec![0.0; n];
        let (mut lower, mut diag_j, mut upper, mut rhs) =
            (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);

        let mut res = self.residual(&u, u_old, &d_old, dt, theta, &mut d_buf, &mut g);
        for _ in 0..opts.max_newton {
            if res <= opts.tol {
                break;
            }
            diag.newton_iterations += 1;
            // scaled Jacobian rows: δ_ij + (Δt θ / h_i) ∂D_i/∂u_j, interior unknowns only
            for i in 1..n - 1 {
                let c = dt * theta / self.h[i];
                let (rl, rr) = self.interface_jac(i, u[i], u[i + 1]);
                let (ll, lr) = self.interface_jac(i - 1, u[i - 1], u[i]);
                lower[i] = if i > 1 { -c * ll } else { 0.0 };
                diag_j[i] = 1.0 + c * (rl - lr);
                upper[i] = if i + 2 < n { c * rr } else { 0.0 };
                rhs[i] = -g[i];
            }
            let delta = thomas(
                &lower[1..n - 1],
                &diag_j[1..n - 1],
                &upper[1..n - 1],
                &rhs[1..n - 1],
            );
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda >= 1.0 / 64.0 {
                trial.copy_from_slice(&u);
                for (i, d) in delta.iter().enumerate() {
                    trial[i + 1] += lambda * d;
                }
                let r = self.residual(&trial, u_old, &d_old, dt, theta, &mut d_buf, &mut g_trial);
                if r < res * (1.0 - 1e-4 * lambda) || r <= opts.tol {
                    u.copy_from_slice(&trial);
                    g.copy_from_slice(&g_trial);
                    res = r;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if res > opts.accept_tol {
            diag.picard_fallbacks += 1;
            let mut lagged = u_old.to_vec();
            let r = self.picard(&mut lagged, u_old, &d_old, dt, theta, opts);
            if r < res {
                u = lagged;
                res = r;
            }
        }
        diag.max_step_residual = diag.max_step_residual.max(res);
        if res <= opts.accept_tol {
            Ok(u)
        } else {
            Err(res)
        }
    }

    /// Flux lagged at the current iterate, diffusion implicit.
    fn picard(
        &self,
        u: &mut [f64],
        u_old: &[f64],
        d_old: &[f64],
        dt: f64,
        theta: f64,
        opts: &SolverOptions,
    ) -> f64 {
        let n = u.len();
        let (mut lower, mut diag_j, mut upper, mut rhs) =
            (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut d_buf = vec![0.0; n];
        let mut g = vec![0.0; n];
        let mut res = f64::INFINITY;
        for _ in 0..opts.max_picard {
            self.divergence(u, &mut d_buf);
            for i in 1..n - 1 {
                let c = dt * theta / self.h[i];
                let (dl, dr) = (self.eps / self.dx[i - 1], self.eps / self.dx[i]);
                let diffusion = dl * (u[i] - u[i - 1]) + dr * (u[i] - u[i + 1]);
                let advection = d_buf[i] - diffusion;
                lower[i] = -c * dl;
                diag_j[i] = 1.0 + c * (dl + dr);
                upper[i] = -c * dr;
                rhs[i] = u_old[i] - dt / self.h[i] * (1.0 - theta) * d_old[i] - c * advection;
                if i == 1 {
                    rhs[i] += c * dl * u[0];
                    lower[i] = 0.0;
                }
                if i == n - 2 {
                    rhs[i] += c * dr * u[n - 1];
                    upper[i] = 0.0;
                }
            }
            let sol = thomas(
                &lower[1..n - 1],
                &diag_j[1..n - 1],
                &upper[1..n - 1],
                &rhs[1..n - 1],
            );
            u[1..n - 1].copy_from_slice(&sol);
            res = self.residual(u, u_old, d_old, dt, theta, &mut d_buf, &mut g);
            if res <= opts.tol {
                break;
            }
        }
        res
    }
}

/// Tridiagonal solve; row `i` reads `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1]`.
/// `sub[0]` and `sup[n-1]` are ignored.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = if n > 1 { sup[0] / diag[0] } else { 0.0 };
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Integrates `u_t + φ(u)_x = ε u_xx` from `u(x, t0) = q(x)`.
pub fn solve(
    flux: &FluxModel,
    q: &dyn Fn(f64) -> f64,
    eps: f64,
    grid: &GridSpec,
    bc: Boundary,
) -> Result<OracleRun> {
    solve_with(flux, q, eps, grid, bc, &SolverOptions::default())
}

pub fn solve_with(
    flux: &FluxModel,
    q: &dyn Fn(f64) -> f64,
    eps: f64,
    grid: &GridSpec,
    bc: Boundary,
    opts: &SolverOptions,
) -> Result<OracleRun> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid("eps", format!("must be positive, got {eps}")));
    }
    let x = grid.nodes()?;
    let n = x.len();
    let dx: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let mut h = vec![0.0; n];
    for i in 1..n - 1 {
        h[i] = 0.5 * (x[i + 1] - x[i - 1]);
    }
    h[0] = 0.5 * dx[0];
    h[n - 1] = 0.5 * dx[n - 2];
    let stepper = Stepper {
        flux,
        eps,
        x,
        h,
        dx,
        scheme: opts.scheme,
    };

    let mut u: Vec<f64> = stepper.x.iter().map(|&xi| q(xi)).collect();
    if let Boundary::Dirichlet { left, right } = bc {
        u[0] = left;
        u[n - 1] = right;
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(invalid("q", "initial data must be finite"));
    }
    let (q_min, q_max) = u
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });

    let times = grid.times();
    let dt = grid.dt();
    let dx_min = stepper.dx.iter().copied().fold(f64::INFINITY, f64::min);
    let mut diag = SolveDiagnostics::default();
    let mut values = Vec::with_capacity(n * grid.nt);
    values.extend_from_slice(&u);

    let mut step_index = 0;
    for k in 1..grid.nt {
        for _ in 0..grid.substeps {
            let speed = u.iter().map(|&v| flux.phi1(v).abs()).fold(0.0, f64::max);
            diag.max_courant = diag.max_courant.max(speed * dt / dx_min);
            diag.max_peclet = diag.max_peclet.max(
                stepper
                    .dx
                    .iter()
                    .map(|d| speed * d / eps)
                    .fold(0.0, f64::max),
            );
            let time = grid.t0 + dt * step_index as f64;
            let next = if step_index < opts.startup_steps {
                stepper
                    .step(&u, 0.5 * dt, 1.0, opts, &mut diag)
                    .and_then(|mid| stepper.step(&mid, 0.5 * dt, 1.0, opts, &mut diag))
            } else {
                stepper.step(&u, dt, 0.5, opts, &mut diag)
            };
            u = next.map_err(|residual| Error::NonConvergence {
                step: step_index,
                time,
                residual,
            })?;
            step_index += 1;
        }
        debug_assert!(k < times.len());
        values.extend_from_slice(&u);
    }
    diag.steps = step_index;
    if diag.max_courant > opts.courant_warning {
        diag.warnings.push(format!(
            "advective Courant number {:.1} exceeds {}; time accuracy is poor",
            diag.max_courant, opts.courant_warning
        ));
    }
    if opts.scheme == FluxScheme::Central && diag.max_peclet > 2.0 {
        diag.warnings.push(format!(
            "cell Peclet number {:.2} exceeds 2; the centred scheme may oscillate",
            diag.max_peclet
        ));
    }
    let field = SampledField::new(stepper.x, times, values)?;
    diag.max_principle_violation = (field.max() - q_max).max(q_min - field.min()).max(0.0);
    Ok(OracleRun {
        field,
        diagnostics: diag,
    })
}

/// Reference profile subtracted before integrating mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FarField {
    Constant(f64),
    Step { left: f64, right: f64, at: f64 },
}

impl FarField {
    /// Step between the end values of the first slice, located mid-domain.
    pub fn from_boundaries(field: &SampledField) -> Self {
        let s = field.slice(0);
        FarField::Step {
            left: s[0],
            right: s[s.len() - 1],
            at: 0.5 * (field.x[0] + field.x[field.nx() - 1]),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            FarField::Constant(c) => c,
            FarField::Step { left, right, at } => {
                if x < at {
                    left
                } else if x > at {
                    right
                } else {
                    0.5 * (left + right)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassHistory {
    /// Trapezoidal `∫ (u - far field) dx` per slice.
    pub masses: Vec<f64>,
    /// `max_k |m_k - m_0|`.
    pub drift: f64,
    /// `drift / ∫|u(·, t0)| dx`.
    pub relative_drift: f64,
    /// Some slice departs from the boundary values inside the outer 5% of nodes.
    pub boundary_contaminated: bool,
}

fn trapezoid(x: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    x.windows(2)
        .enumerate()
        .map(|(i, w)| 0.5 * (w[1] - w[0]) * (f(i) + f(i + 1)))
        .sum()
}

pub fn conserved_mass(field: &SampledField, far_field: &FarField) -> MassHistory {
    let ref_profile: Vec<f64> = field.x.iter().map(|&x| far_field.eval(x)).collect();
    let masses: Vec<f64> = (0..field.nt())
        .map(|k| {
            let s = field.slice(k);
            trapezoid(&field.x, |i| s[i] - ref_profile[i])
        })
        .collect();
    let drift = masses
        .iter()
        .map(|m| (m - masses[0]).abs())
        .fold(0.0, f64::max);
    let first = field.slice(0);
    let l1 = trapezoid(&field.x, |i| first[i].abs());
    let relative_drift = if l1 > 0.0 { drift / l1 } else { drift };

    let nx = field.nx();
    let band = (nx / 20).max(2);
    let range = (field.max() - field.min()).max(1.0);
    let (left, right) = (first[0], first[nx - 1]);
    let boundary_contaminated = (0..field.nt()).any(|k| {
        let s = field.slice(k);
        s[..band].iter().any(|v| (v - left).abs() > 1e-8 * range)
            || s[nx - band..]
                .iter()
                .any(|v| (v - right).abs() > 1e-8 * range)
    });
    MassHistory {
        masses,
        drift,
        relative_drift,
        boundary_contaminated,
    }
}
