//! Quadrature on the half-line `(0, ∞)`.
//!
//! Nyström discretization uses a fixed Gauss–Legendre rule on `(0, 1)`
//! pushed forward by a monotone map onto the half-line; high-accuracy scalar
//! integrals use adaptive Gauss–Kronrod subdivision on the mapped interval.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Monotone map from `(0, 1)` onto `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// `p = L t / (1 - t)`; resolves algebraic decay (the default).
    Algebraic,
    /// `p = L tan(π t / 2)`; slightly denser far tail.
    Tangent,
}

impl MapKind {
    fn apply(self, scale: f64, t: f64) -> (f64, f64) {
        match self {
            MapKind::Algebraic => {
                let u = 1.0 - t;
                (scale * t / u, scale / (u * u))
            }
            MapKind::Tangent => {
                let half_pi = std::f64::consts::FRAC_PI_2;
                let c = (half_pi * t).cos();
                (scale * (half_pi * t).tan(), scale * half_pi / (c * c))
            }
        }
    }
}

/// Configuration for half-line grids and adaptive integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub n_points: usize,
    pub map_scale: f64,
    pub map_kind: MapKind,
    /// Absolute tolerance for adaptive integrals.
    pub adaptive_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            n_points: 200,
            map_scale: 2.0,
            map_kind: MapKind::Algebraic,
            adaptive_tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn with_n(n_points: usize) -> Self {
        QuadratureConfig {
            n_points,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            return Err(Error::invalid(format!(
                "grid needs at least 2 points, got {}",
                self.n_points
            )));
        }
        if !(self.map_scale.is_finite() && self.map_scale > 0.0) {
            return Err(Error::invalid(format!(
                "map scale must be positive and finite, got {}",
                self.map_scale
            )));
        }
        if !(self.adaptive_tol.is_finite() && self.adaptive_tol > 0.0) {
            return Err(Error::invalid(format!(
                "adaptive tolerance must be positive, got {}",
                self.adaptive_tol
            )));
        }
        Ok(())
    }
}

/// Nodes and weights of an open quadrature rule on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfLineGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    map_scale: f64,
    map_kind: MapKind,
}

impl HalfLineGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn map_scale(&self) -> f64 {
        self.map_scale
    }

    pub fn map_kind(&self) -> MapKind {
        self.map_kind
    }

    /// `Σ w_i f(p_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }
}

/// Build the half-line grid from a Gauss–Legendre rule and the config's map.
/// The rule is open: no node sits at `0` or at infinity.
pub fn build_grid(config: &QuadratureConfig) -> Result<HalfLineGrid> {
    config.validate()?;
    let (xs, ws) = gauss_legendre(config.n_points);
    let mut nodes = Vec::with_capacity(config.n_points);
    let mut weights = Vec::with_capacity(config.n_points);
    for (&x, &w) in xs.iter().zip(&ws) {
        let t = 0.5 * (x + 1.0);
        let (p, jac) = config.map_kind.apply(config.map_scale, t);
        nodes.push(p);
        weights.push(0.5 * w * jac);
    }
    debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    Ok(HalfLineGrid {
        nodes,
        weights,
        map_scale: config.map_scale,
        map_kind: config.map_kind,
    })
}

/// Gauss–Legendre nodes (ascending) and weights on `(-1, 1)`, by Newton
/// iteration on the Legendre recurrence.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess for the i-th root (descending).
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-15 {
                let (p2, d2) = legendre_with_derivative(n, z);
                z -= p2 / d2;
                dp = d2;
                break;
            }
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        // Central node is exactly zero.
        let (_, d) = legendre_with_derivative(n, 0.0);
        x[n / 2] = 0.0;
        w[n / 2] = 2.0 / (d * d);
    }
    (x, w)
}

pub(crate) fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Gauss–Kronrod 15(7) on `[a, b]`: returns (value, error estimate).
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_gauss = WG[3] * fc;
    let mut result_kronrod = WGK[7] * fc;
    let mut resabs = result_kronrod.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * result_kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let value = result_kronrod * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

const MAX_INTERVALS: usize = 4000;

/// Adaptive integration of `f` over `(0, ∞)` to absolute tolerance `tol`.
///
/// The half-line is mapped onto `(0, 1)` by `p = L t / (1 - t)` and the
/// mapped integrand is subdivided greedily by largest error estimate.
/// Returns the value and a conservative error estimate; a non-convergence
/// error still carries the best estimate found.
pub fn adaptive_integrate(f: impl Fn(f64) -> f64, tol: f64) -> Result<(f64, f64)> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid(format!(
            "adaptive tolerance must be positive, got {tol}"
        )));
    }
    let scale = 2.0;
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let u = 1.0 - t;
        let p = scale * t / u;
        f(p) * scale / (u * u)
    };
    adaptive_on_unit_interval(&g, tol, "half-line integral")
}

/// Adaptive Gauss–Kronrod on `[0, 1]` with greedy bisection.
fn adaptive_on_unit_interval(
    g: &impl Fn(f64) -> f64,
    tol: f64,
    context: &str,
) -> Result<(f64, f64)> {
    #[derive(Debug)]
    struct Interval {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (value, err) = gk15(g, 0.0, 1.0);
    let mut intervals = vec![Interval {
        a: 0.0,
        b: 1.0,
        value,
        err,
    }];
    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.err).sum();
        let total: f64 = intervals.iter().map(|iv| iv.value).sum();
        if !total.is_finite() {
            return Err(Error::DivergentIntegral(format!(
                "{context}: non-finite partial sums"
            )));
        }
        if total_err <= tol {
            return Ok((total, total_err));
        }
        if intervals.len() >= MAX_INTERVALS {
            return Err(Error::IntegrationDidNotConverge {
                context: context.to_string(),
                best: total,
                err_estimate: total_err,
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.err.total_cmp(&b.1.err))
            .map(|(i, _)| i)
            .expect("non-empty interval list");
        let Interval { a, b, .. } = intervals.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Interval at floating-point resolution; keep its estimate.
            let (v, e) = gk15(g, a, b);
            intervals.push(Interval {
                a,
                b,
                value: v,
                err: e * 0.0,
            });
            continue;
        }
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (v, e) = gk15(g, lo, hi);
            intervals.push(Interval {
                a: lo,
                b: hi,
                value: v,
                err: e,
            });
        }
    }
}
