//! Fourier-side kernels of the skeleton blocks.
//!
//! `t0_symbol` is the multiplication symbol of the diagonal block; `t_theta`
//! is the two-variable kernel coupling two delta lines at angle `θ`;
//! `t_theta_parity` restricts to the even/odd subspaces of `L²(ℝ₊)`;
//! `tilde_kernel_mm` is the odd kernel at `θ = 2π/3` scaled by the threshold
//! resolvent, whose bottom eigenvalue is `-1`.
//!
//! All formulas are evaluated in algebraically rearranged forms that stay
//! cancellation-free down to `p = q = 0`, so boundary values are ordinary
//! evaluations rather than special-cased limits.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Even/odd restriction onto the half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// A parity-restricted kernel at angle `θ ∈ (0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    theta: f64,
    parity: Parity,
}

impl KernelSpec {
    pub fn new(theta: f64, parity: Parity) -> Result<Self> {
        check_angle(theta)?;
        Ok(KernelSpec { theta, parity })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Kernel value at `(p, q)`, `p, q ≥ 0`.
    pub fn eval(&self, p: f64, q: f64) -> f64 {
        t_theta_parity(self, p, q)
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if !(theta.is_finite() && theta > 0.0 && theta < PI && theta.sin().abs() > 1e-12) {
        return Err(Error::invalid(format!(
            "kernel angle must lie strictly inside (0, pi), got {theta}"
        )));
    }
    Ok(())
}

/// Multiplication symbol of the diagonal block: `1/√(p² + 2)`.
#[inline]
pub fn t0_symbol(p: f64) -> f64 {
    1.0 / (p * p + 2.0).sqrt()
}

/// Full-line kernel at angle `θ`:
/// `[2π|sin θ|]⁻¹ [ (p² - 2cosθ·pq + q²)/(2sin²θ) + 1 ]⁻¹`.
pub fn t_theta(theta: f64, p: f64, q: f64) -> Result<f64> {
    check_angle(theta)?;
    let s = theta.sin().abs();
    let c = theta.cos();
    let denom = (p * p - 2.0 * c * p * q + q * q) / (2.0 * s * s) + 1.0;
    Ok(1.0 / (2.0 * PI * s * denom))
}

/// Parity-restricted kernel on the half-line:
/// `T^±(p, q) = T(p, q) ± T(p, -q)` for `p, q ≥ 0`.
///
/// Uses the combined rational form `2·norm·B/(B² - d²)` (even) and
/// `2·norm·d/(B² - d²)` (odd), with `B = (p²+q²)/(2sin²θ) + 1` and
/// `d = cosθ·pq/sin²θ`, which avoids the cancellation of the naive sum.
pub fn t_theta_parity(spec: &KernelSpec, p: f64, q: f64) -> f64 {
    debug_assert!(p >= 0.0 && q >= 0.0);
    let s = spec.theta.sin().abs();
    let c = spec.theta.cos();
    let norm = 1.0 / (2.0 * PI * s);
    let inv_2s2 = 0.5 / (s * s);
    let b = (p * p + q * q) * inv_2s2 + 1.0;
    let d = 2.0 * inv_2s2 * c * p * q;
    match spec.parity {
        Parity::Even => 2.0 * norm * b / (b * b - d * d),
        Parity::Odd => 2.0 * norm * d / (b * b - d * d),
    }
}

/// `√((1/√2 - t0(p)) / p²)`, continued to `p = 0`.
///
/// The radicand equals `1/(√2·s·(s + √2))` with `s = √(p² + 2)`, an exact
/// rewrite with no subtraction, so small `p` costs no precision.
#[inline]
fn threshold_resolvent_root_over_p(p: f64) -> f64 {
    let s = (p * p + 2.0).sqrt();
    1.0 / (std::f64::consts::SQRT_2 * s * (s + std::f64::consts::SQRT_2)).sqrt()
}

/// Odd kernel at `θ = 2π/3` scaled by the threshold resolvent:
/// `T⁻(p, q) / √((1/√2 - t0(p))(1/√2 - t0(q)))`.
///
/// Valid for all `p, q ≥ 0` including the boundary, where it takes its
/// continuous-extension value; `tilde_kernel_mm(0, 0) = -16√2/(3√3·π)`.
pub fn tilde_kernel_mm(p: f64, q: f64) -> f64 {
    debug_assert!(p >= 0.0 && q >= 0.0);
    // T⁻(p,q)/(pq) at θ = 2π/3 in rational form.
    let b = 1.0 + 2.0 * (p * p + q * q) / 3.0;
    let d = -2.0 * p * q / 3.0;
    let u = -4.0 / (3.0 * 3.0f64.sqrt() * PI * (b * b - d * d));
    u / (threshold_resolvent_root_over_p(p) * threshold_resolvent_root_over_p(q))
}

/// The origin value `-16√2/(3√3·π)` of [`tilde_kernel_mm`].
pub fn tilde_mm_origin_constant() -> f64 {
    -16.0 * std::f64::consts::SQRT_2 / (3.0 * 3.0f64.sqrt() * PI)
}

/// Closed-form eigenvector of [`tilde_kernel_mm`] with eigenvalue `-1`:
/// `f(p) = [1/√2 - (p²+2)^{-1/2}]^{1/2} / (p(2p² + 3))`, evaluated in the
/// cancellation-free form; `f(0⁺) = 1/(3·2^{5/4})`.
pub fn tilde_mm_eigenvector(p: f64) -> f64 {
    debug_assert!(p >= 0.0);
    threshold_resolvent_root_over_p(p) / (2.0 * p * p + 3.0)
}
