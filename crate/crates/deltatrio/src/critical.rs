//! Critical-charge computation from the threshold kernel.
//!
//! In the fully symmetric sector the skeleton at the threshold `k = 1/√2`
//! reads `S(k) = k - T₀ - K(k)` with
//! `K(k) = T₁₂⁺ - 2·T₂₃⁺·(T₀ + k/λ)⁻¹·T₂₃⁺`. If the kernel of `K(1/√2)` is
//! positive at the origin, a variational trial concentrated near zero
//! momentum pushes `inf S(1/√2)` below zero and a bound state exists.
//! Since the subtracted term shrinks as `Z` grows, `𝒦(0,0)` is strictly
//! increasing in `Z`; its unique sign change (when the weak-charge limit is
//! negative) is the critical-charge upper bound `Z_c^ub`.
//!
//! `T₀` acts by multiplication on the Fourier side, so `𝒦(0,0)` is a single
//! one-dimensional integral: no matrices enter this module.

use crate::dd::{half_line_rule_dd, Dd};
use crate::error::{Error, Result};
use crate::geometry::{derive_geometry, mass_ratio_from_theta12, ModelParams};
use crate::kernels::{t0_symbol, KernelSpec, Parity};
use crate::quadrature::adaptive_integrate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// The two terms of `𝒦(0,0)` at a given geometry and charge.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct K00Evaluation {
    /// `direct_term - schur_term`.
    pub value: f64,
    /// `T₁₂⁺(0,0) = 1/(π sin θ₁₂)`.
    pub direct_term: f64,
    /// `2∫ T₂₃⁺(0,q)² (t0(q) + k/λ)⁻¹ dq ≥ 0` at `k = 1/√2`.
    pub schur_term: f64,
    /// Absolute quadrature tolerance used.
    pub tol: f64,
}

/// One point of the critical-charge curve.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub theta12: f64,
    pub mass_ratio: f64,
    /// Critical-charge upper bound; exactly `0` when the weak-charge limit
    /// of `𝒦(0,0)` is already positive.
    pub z_c_ub: f64,
    /// `𝒦(0,0)` at the returned charge (≈ 0 for a positive root, the
    /// weak-charge limit value when `z_c_ub = 0`).
    pub k00_at_root: f64,
    pub quad_tol: f64,
}

/// Reduced angle data needed by the threshold kernel.
#[derive(Debug, Clone, Copy)]
struct ThresholdGeometry {
    theta12: f64,
    theta23: f64,
    nu: f64,
}

fn threshold_geometry(theta12: f64) -> Result<ThresholdGeometry> {
    let mu = mass_ratio_from_theta12(theta12)?;
    let params = ModelParams::new(mu, 1.0)?;
    let g = derive_geometry(&params);
    Ok(ThresholdGeometry {
        theta12: g.theta12,
        theta23: g.theta23,
        nu: g.nu,
    })
}

fn k00_impl(geom: &ThresholdGeometry, z: f64, tol: f64) -> Result<K00Evaluation> {
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Error::invalid(format!(
            "charge must be nonnegative and finite, got {z}"
        )));
    }
    let even23 = KernelSpec::new(geom.theta23, Parity::Even)?;
    let direct_term = 1.0 / (PI * geom.theta12.sin());
    // k/λ = k Z / ν at k = 1/√2; Z = 0 gives the weak-charge limit where
    // the resolvent factor becomes 1/t0(q).
    let k_over_lambda = FRAC_1_SQRT_2 * z / geom.nu;
    let integrand = move |q: f64| {
        let t = even23.eval(0.0, q);
        2.0 * t * t / (t0_symbol(q) + k_over_lambda)
    };
    let (schur_term, _) = adaptive_integrate(integrand, tol)?;
    Ok(K00Evaluation {
        value: direct_term - schur_term,
        direct_term,
        schur_term,
        tol,
    })
}

/// `𝒦(0,0)` for a fully specified geometry (charge taken from `λ = ν/Z`).
pub fn k00(geometry: &crate::geometry::Geometry, tol: f64) -> Result<K00Evaluation> {
    let geom = ThresholdGeometry {
        theta12: geometry.theta12,
        theta23: geometry.theta23,
        nu: geometry.nu,
    };
    k00_impl(&geom, geometry.charge(), tol)
}

/// `𝒦(0,0)` as a function of the charge at fixed `θ₁₂`; `z = 0` evaluates
/// the weak-charge limit.
pub fn k00_at_charge(theta12: f64, z: f64, tol: f64) -> Result<K00Evaluation> {
    let geom = threshold_geometry(theta12)?;
    k00_impl(&geom, z, tol)
}

/// Critical-charge upper bound at angle `θ₁₂ ∈ [π/2, π)`.
///
/// Returns exactly `z_c_ub = 0` when `𝒦(0,0) > 0` for every positive
/// charge (weak-charge limit already positive); otherwise brackets and
/// bisects the unique sign change of `Z ↦ 𝒦(0,0)` until `|𝒦| ≤ tol`.
pub fn z_critical_ub(theta12: f64, tol: f64) -> Result<CriticalPoint> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let geom = threshold_geometry(theta12)?;
    let mass_ratio = mass_ratio_from_theta12(theta12)?;
    let qtol = (tol * 0.1).min(1e-13);
    let limit = k00_impl(&geom, 0.0, qtol)?;
    if limit.value >= 0.0 {
        return Ok(CriticalPoint {
            theta12,
            mass_ratio,
            z_c_ub: 0.0,
            k00_at_root: limit.value,
            quad_tol: qtol,
        });
    }
    // Bracket: the subtracted term vanishes as Z → ∞, so 𝒦 → direct > 0.
    let mut hi = 0.5;
    let mut f_hi = k00_impl(&geom, hi, qtol)?.value;
    let mut guard = 0;
    while f_hi < 0.0 {
        hi *= 2.0;
        f_hi = k00_impl(&geom, hi, qtol)?.value;
        guard += 1;
        if guard > 60 {
            return Err(Error::BracketFailure(format!(
                "K(0,0) still negative at Z = {hi:.3e} (value {f_hi:.6e}) for theta12 = {theta12}"
            )));
        }
    }
    let mut lo = 0.0;
    let mut best = (hi, f_hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = k00_impl(&geom, mid, qtol)?.value;
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid.abs() <= tol {
            break;
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalPoint {
        theta12,
        mass_ratio,
        z_c_ub: best.0,
        k00_at_root: best.1,
        quad_tol: qtol,
    })
}

/// Critical-charge upper bound parametrized by the mass ratio.
pub fn z_critical_ub_for_mass_ratio(mass_ratio: f64, tol: f64) -> Result<CriticalPoint> {
    let params = ModelParams::new(mass_ratio, 1.0)?;
    let theta12 = derive_geometry(&params).theta12;
    let mut point = z_critical_ub(theta12, tol)?;
    // Report the caller's mass ratio rather than the round-tripped one.
    point.mass_ratio = mass_ratio;
    Ok(point)
}

/// Mass ratio below which an arbitrarily small positive charge binds:
/// the sign change of the weak-charge limit of `𝒦(0,0)`, located by
/// bisection in `μ`.
pub fn zero_charge_mass_threshold(tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let qtol = 1e-13;
    let limit_at = |mu: f64| -> Result<f64> {
        let params = ModelParams::new(mu, 1.0)?;
        let g = derive_geometry(&params);
        let geom = ThresholdGeometry {
            theta12: g.theta12,
            theta23: g.theta23,
            nu: g.nu,
        };
        Ok(k00_impl(&geom, 0.0, qtol)?.value)
    };
    let (mut lo, mut hi) = (0.1, 1.0);
    let f_lo = limit_at(lo)?;
    let f_hi = limit_at(hi)?;
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::BracketFailure(format!(
            "weak-charge limit does not change sign on [{lo}, {hi}]: f({lo}) = {f_lo:.6e}, f({hi}) = {f_hi:.6e}"
        )));
    }
    while hi - lo > tol.max(1e-12) {
        let mid = 0.5 * (lo + hi);
        if limit_at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One entry of a critical-curve sweep; per-point failures are recorded
/// without aborting the sweep.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub theta12: f64,
    pub point: Result<CriticalPoint>,
}

/// Sweep `z_critical_ub` over a uniform `θ₁₂` grid (inclusive endpoints),
/// in parallel, ordered by angle.
pub fn critical_curve(
    theta_min: f64,
    theta_max: f64,
    steps: usize,
    tol: f64,
) -> Result<Vec<CurvePoint>> {
    if !(theta_min >= std::f64::consts::FRAC_PI_2 - 1e-12
        && theta_min < theta_max
        && theta_max < PI)
    {
        return Err(Error::invalid(format!(
            "need pi/2 <= theta_min < theta_max < pi, got [{theta_min}, {theta_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    let h = (theta_max - theta_min) / (steps - 1) as f64;
    let thetas: Vec<f64> = (0..steps).map(|i| theta_min + h * i as f64).collect();
    Ok(thetas
        .par_iter()
        .map(|&theta12| CurvePoint {
            theta12,
            point: z_critical_ub(theta12, tol),
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Extended-precision path (double-double), for the threshold integral only.
// ---------------------------------------------------------------------------

/// Angle data in double-double arithmetic. Everything is algebraic in `μ`,
/// so no transcendental evaluations are needed.
#[derive(Debug, Clone, Copy)]
struct DdGeometry {
    nu: Dd,
    sin_theta12: Dd,
    sin_theta23: Dd,
}

fn dd_geometry(mass_ratio: f64) -> DdGeometry {
    let quarter = Dd::from_f64(0.25);
    let (alpha_sq, nu_sq, cos12) = if mass_ratio.is_infinite() {
        (quarter, Dd::from_f64(0.5), Dd::ZERO)
    } else {
        let mu = Dd::from_f64(mass_ratio);
        let alpha_sq = quarter + Dd::from_f64(0.5) / mu;
        let nu_sq = quarter + alpha_sq;
        let cos12 = -(Dd::ONE / (Dd::ONE + mu));
        (alpha_sq, nu_sq, cos12)
    };
    let nu = nu_sq.sqrt();
    DdGeometry {
        nu,
        sin_theta12: (Dd::ONE - cos12 * cos12).sqrt(),
        sin_theta23: (alpha_sq / nu_sq).sqrt(),
    }
}

/// `𝒦(0,0)` in double-double precision on an `n`-point half-line rule.
pub fn k00_dd(mass_ratio: f64, z: Dd, n: usize) -> Dd {
    let geom = dd_geometry(mass_ratio);
    let two = Dd::from_f64(2.0);
    let direct = Dd::ONE / (Dd::PI * geom.sin_theta12);
    let k_over_lambda = z / (two.sqrt() * geom.nu);
    let half_inv_s23_sq = Dd::from_f64(0.5) / (geom.sin_theta23 * geom.sin_theta23);
    let c23 = Dd::ONE / (Dd::PI * geom.sin_theta23);
    let (nodes, weights) = half_line_rule_dd(n, 2.0);
    let mut schur = Dd::ZERO;
    for (q, w) in nodes.iter().zip(&weights) {
        let qq = *q * *q;
        let t_plus = c23 / (qq * half_inv_s23_sq + Dd::ONE);
        let t0 = Dd::ONE / (qq + two).sqrt();
        schur = schur + *w * two * t_plus * t_plus / (t0 + k_over_lambda);
    }
    direct - schur
}

/// Extended-precision critical charge: polishes the `f64` root by secant
/// iteration in double-double arithmetic. Returns `0` when the weak-charge
/// limit is already positive.
pub fn z_critical_ub_dd(mass_ratio: f64, n: usize) -> Result<Dd> {
    let params = ModelParams::new(mass_ratio, 1.0)?;
    let theta12 = derive_geometry(&params).theta12;
    let seed = z_critical_ub(theta12, 1e-12)?;
    if seed.z_c_ub == 0.0 {
        return Ok(Dd::ZERO);
    }
    let mut z0 = Dd::from_f64(seed.z_c_ub * (1.0 - 1e-10));
    let mut z1 = Dd::from_f64(seed.z_c_ub * (1.0 + 1e-10));
    let mut f0 = k00_dd(mass_ratio, z0, n);
    let mut f1 = k00_dd(mass_ratio, z1, n);
    for _ in 0..12 {
        let df = f1 - f0;
        if df.abs().hi == 0.0 {
            break;
        }
        let z2 = z1 - f1 * (z1 - z0) / df;
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = k00_dd(mass_ratio, z1, n);
        if f1.abs().hi < 1e-29 {
            break;
        }
    }
    Ok(z1)
}
