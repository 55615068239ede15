//! One-dimensional quadrature.
//!
//! Two independent schemes: a globally adaptive 21-point Gauss-Kronrod
//! integrator that handles vector-valued integrands (all components share
//! one subdivision), and a composite fixed-order Gauss-Legendre rule used
//! as a cross-check.

use std::f64::consts::PI;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Tolerance relative to `∫|f|` of each component.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            abs_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VecQuadResult {
    pub values: Vec<f64>,
    /// Estimates of `∫|f_k|`.
    pub abs_values: Vec<f64>,
    pub errors: Vec<f64>,
    pub intervals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    abs: Vec<f64>,
    err: Vec<f64>,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk21<F>(f: &mut F, dim: usize, a: f64, b: f64, buf: &mut [Vec<f64>; 21]) -> Panel
where
    F: FnMut(f64, &mut [f64]),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // buf[0] = center, buf[2j+1] = center - h x_j, buf[2j+2] = center + h x_j
    f(center, &mut buf[0]);
    for j in 0..10 {
        let dx = half * XGK[j];
        let (lo, hi) = buf.split_at_mut(2 * j + 2);
        f(center - dx, &mut lo[2 * j + 1]);
        f(center + dx, &mut hi[0]);
    }
    let mut value = vec![0.0; dim];
    let mut abs = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    for k in 0..dim {
        let fc = buf[0][k];
        let mut kron = WGK[10] * fc;
        let mut gauss = 0.0;
        let mut res_abs = WGK[10] * fc.abs();
        for j in 0..10 {
            let f1 = buf[2 * j + 1][k];
            let f2 = buf[2 * j + 2][k];
            kron += WGK[j] * (f1 + f2);
            res_abs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * kron;
        let mut res_asc = WGK[10] * (fc - mean).abs();
        for j in 0..10 {
            res_asc +=
                WGK[j] * ((buf[2 * j + 1][k] - mean).abs() + (buf[2 * j + 2][k] - mean).abs());
        }
        let h = half.abs();
        value[k] = kron * half;
        abs[k] = res_abs * h;
        err[k] = rescale_error((kron - gauss) * half, res_abs * h, res_asc * h);
    }
    Panel {
        a,
        b,
        value,
        abs,
        err,
    }
}

/// Integrates the `dim`-component integrand `f(s, out)` over `[breaks[0], breaks[last]]`.
///
/// `breaks` must be sorted; every interior break starts a new panel so that
/// known features (kinks, narrow peaks) are never straddled by the first rule.
pub fn integrate_vec<F>(mut f: F, dim: usize, breaks: &[f64], opts: QuadOptions) -> VecQuadResult
where
    F: FnMut(f64, &mut [f64]),
{
    assert!(breaks.len() >= 2, "need at least one interval");
    let mut buf: [Vec<f64>; 21] = std::array::from_fn(|_| vec![0.0; dim]);
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk21(&mut f, dim, w[0], w[1], &mut buf))
        .collect();
    if panels.is_empty() {
        return VecQuadResult {
            values: vec![0.0; dim],
            abs_values: vec![0.0; dim],
            errors: vec![0.0; dim],
            intervals: 0,
            converged: true,
        };
    }

    let totals = |panels: &[Panel]| {
        let mut value = vec![0.0; dim];
        let mut abs = vec![0.0; dim];
        let mut err = vec![0.0; dim];
        for p in panels {
            for k in 0..dim {
                value[k] += p.value[k];
                abs[k] += p.abs[k];
                err[k] += p.err[k];
            }
        }
        (value, abs, err)
    };

    let mut converged = false;
    loop {
        let (_, abs, err) = totals(&panels);
        let tol: Vec<f64> = abs
            .iter()
            .map(|&a| (opts.rel_tol * a).max(opts.abs_tol).max(f64::MIN_POSITIVE))
            .collect();
        if err.iter().zip(&tol).all(|(e, t)| e <= t) {
            converged = true;
            break;
        }
        if panels.len() >= opts.max_intervals {
            break;
        }
        let worst = panels
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let score = p
                    .err
                    .iter()
                    .zip(&tol)
                    .map(|(e, t)| e / t)
                    .fold(0.0, f64::max);
                (i, score)
            })
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(i, _)| i)
            .expect("non-empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            // interval exhausted at machine resolution
            panels.push(p);
            break;
        }
        panels.push(gk21(&mut f, dim, p.a, mid, &mut buf));
        panels.push(gk21(&mut f, dim, mid, p.b, &mut buf));
    }

    let intervals = panels.len();
    let (values, abs_values, errors) = totals(&panels);
    VecQuadResult {
        values,
        abs_values,
        errors,
        intervals,
        converged,
    }
}

pub fn integrate_with_breaks<F>(mut f: F, breaks: &[f64], opts: QuadOptions) -> QuadResult
where
    F: FnMut(f64) -> f64,
{
    let r = integrate_vec(|s, out: &mut [f64]| out[0] = f(s), 1, breaks, opts);
    QuadResult {
        value: r.values[0],
        error: r.errors[0],
        converged: r.converged,
    }
}

pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadOptions) -> QuadResult
where
    F: FnMut(f64) -> f64,
{
    integrate_with_breaks(f, &[a, b], opts)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    // (P_n(x), P_n'(x)) by the three-term recurrence
    let legendre = |x: f64| {
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
    };
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` points each.
pub fn composite_gauss_legendre<F>(mut f: F, a: f64, b: f64, panels: usize, order: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    let (x, w) = gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let c = lo + 0.5 * width;
        let h = 0.5 * width;
        let panel: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * f(c + h * xi)).sum();
        total += panel * h;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in [1usize, 2, 5, 10, 20, 33] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
            // degree 2n-1 monomial with even power
            let deg = 2 * n - 2;
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((q - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn adaptive_gaussian() {
        let r = integrate(|s| (-s * s).exp(), -10.0, 10.0, QuadOptions::default());
        assert!(r.converged);
        assert!((r.value - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn adaptive_with_kink_break() {
        let r = integrate_with_breaks(|s: f64| s.abs(), &[-1.0, 0.0, 2.0], QuadOptions::default());
        assert!((r.value - 2.5).abs() < 1e-14);
    }

    #[test]
    fn vector_components_share_subdivision() {
        let r = integrate_vec(
            |s, out: &mut [f64]| {
                let g = (-s * s).exp();
                out[0] = g;
                out[1] = s * g;
                out[2] = s * s * g;
            },
            3,
            &[-9.0, 9.0],
            QuadOptions::default(),
        );
        assert!((r.values[0] - PI.sqrt()).abs() < 1e-14);
        assert!(r.values[1].abs() < 1e-15);
        assert!((r.values[2] - 0.5 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn composite_rule_matches_adaptive() {
        let f = |s: f64| (s.sin() + 2.0).ln() * (-0.1 * s * s).exp();
        let a = integrate(f, -12.0, 12.0, QuadOptions::default()).value;
        let b = composite_gauss_legendre(f, -12.0, 12.0, 40, 20);
        assert!((a - b).abs() < 1e-12 * a.abs());
    }
}
