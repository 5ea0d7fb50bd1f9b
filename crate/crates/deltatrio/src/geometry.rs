//! Reduction of the physical three-particle parameters to the 2-D geometry.
//!
//! Two particles of mass `m`, charge `-e`, one of mass `M = μ·m`, charge
//! `+Ze`. After removing the center of mass and rescaling, the relative
//! motion sees three delta lines through the origin spanned by unit vectors
//! `A₁, A₂, A₃`, with couplings `(-1, -1, +λ)` and `λ = ν/Z`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Physical input parameters: mass ratio `μ = M/m` (infinity allowed) and
/// the positive charge `Z` in units of `e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    mass_ratio: f64,
    charge: f64,
}

impl ModelParams {
    pub fn new(mass_ratio: f64, charge: f64) -> Result<Self> {
        if mass_ratio.is_nan() || mass_ratio <= 0.0 {
            return Err(Error::invalid(format!(
                "mass ratio must be positive (or inf), got {mass_ratio}"
            )));
        }
        if !(charge > 0.0 && charge.is_finite()) {
            return Err(Error::invalid(format!(
                "charge must be positive and finite, got {charge}"
            )));
        }
        Ok(ModelParams { mass_ratio, charge })
    }

    pub fn mass_ratio(&self) -> f64 {
        self.mass_ratio
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }
}

/// Derived reduced geometry. Angles are stored in radians and always derived
/// from the mass ratio, never set independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub alpha_sq: f64,
    pub nu: f64,
    /// Coupling of the repulsive line, `λ = ν / Z`.
    pub lambda: f64,
    /// Angle between `A₁` and `A₂` (the two attractive lines).
    pub theta12: f64,
    /// Angle between `A₂` and `A₃` (attractive vs repulsive line); equals
    /// the angle between `A₁` and `A₃` by reflection symmetry.
    pub theta23: f64,
    /// The unit vectors `A₁, A₂, A₃`.
    pub unit_vectors: [[f64; 2]; 3],
}

impl Geometry {
    /// Charge recovered from the stored couplings (`Z = ν / λ`).
    pub fn charge(&self) -> f64 {
        self.nu / self.lambda
    }
}

/// Energy conversion factor between the dimensionless reduced operator and
/// the physical relative-motion Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyScale {
    /// `m Z² e⁴ / (2 ħ² ν²)` in the caller's unit system.
    pub factor: f64,
}

/// Unit system for [`energy_scale`]; defaults to `ħ = m = e = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
    pub charge_unit: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units {
            hbar: 1.0,
            mass: 1.0,
            charge_unit: 1.0,
        }
    }
}

/// Map physical parameters to the reduced geometry.
///
/// `α² = (μ + 2) / (4μ)`, `ν = √(1/4 + α²)`,
/// `A₁ = (α, -1/2)/ν`, `A₂ = (-α, -1/2)/ν`, `A₃ = (0, 1)`.
/// For `μ = ∞` this gives `α² = 1/4` exactly.
pub fn derive_geometry(params: &ModelParams) -> Geometry {
    let mu = params.mass_ratio;
    let alpha_sq = 0.25 + 0.5 / mu;
    let nu_sq = 0.25 + alpha_sq;
    let nu = nu_sq.sqrt();
    let alpha = alpha_sq.sqrt();
    let a1 = [alpha / nu, -0.5 / nu];
    let a2 = [-alpha / nu, -0.5 / nu];
    let a3 = [0.0, 1.0];
    // cos θ₁₂ = (1/4 - α²)/ν² simplifies to -1/(1+μ).
    let cos12 = -1.0 / (1.0 + mu);
    let cos23 = -0.5 / nu;
    Geometry {
        alpha_sq,
        nu,
        lambda: nu / params.charge,
        theta12: cos12.acos(),
        theta23: cos23.acos(),
        unit_vectors: [a1, a2, a3],
    }
}

/// Inverse of the `μ ↦ θ₁₂` map: `μ = -(1 + cos θ)/cos θ`, with `θ = π/2`
/// mapping to `μ = ∞`.
pub fn mass_ratio_from_theta12(theta12: f64) -> Result<f64> {
    if !(theta12.is_finite() && theta12 >= FRAC_PI_2 - 1e-12 && theta12 < PI) {
        return Err(Error::invalid(format!(
            "theta12 must lie in [pi/2, pi), got {theta12}"
        )));
    }
    let c = theta12.cos();
    if c.abs() < 1e-12 {
        return Ok(f64::INFINITY);
    }
    if c > 0.0 {
        return Err(Error::invalid(format!(
            "theta12 must lie in [pi/2, pi), got {theta12}"
        )));
    }
    Ok(-(1.0 + c) / c)
}

/// Energy conversion factor `m Z² e⁴ / (2 ħ² ν²)`.
pub fn energy_scale(
    params: &ModelParams,
    geometry: &Geometry,
    units: Option<Units>,
) -> Result<EnergyScale> {
    let u = units.unwrap_or_default();
    if !(u.hbar > 0.0 && u.mass > 0.0 && u.charge_unit > 0.0) {
        return Err(Error::invalid(
            "units (hbar, mass, charge) must all be positive".to_string(),
        ));
    }
    let z = params.charge * u.charge_unit;
    let factor = u.mass * z * z * u.charge_unit * u.charge_unit
        / (2.0 * u.hbar * u.hbar * geometry.nu * geometry.nu);
    Ok(EnergyScale { factor })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(mu: f64, z: f64) -> Geometry {
        derive_geometry(&ModelParams::new(mu, z).unwrap())
    }

    #[test]
    fn equal_masses_reference_values() {
        let g = geom(1.0, 1.0);
        assert!((g.alpha_sq - 0.75).abs() < 1e-15);
        assert!((g.nu - 1.0).abs() < 1e-15);
        assert!((g.theta12 - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!((g.theta23 - 2.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn infinite_mass_reference_values() {
        let g = geom(f64::INFINITY, 1.0);
        assert_eq!(g.alpha_sq, 0.25);
        assert!((g.nu - 0.5f64.sqrt()).abs() < 1e-16);
        assert_eq!(g.theta12, FRAC_PI_2);
        assert!((g.theta23 - 3.0 * PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn lambda_is_nu_over_charge() {
        let g = geom(1.0, 2.0);
        assert!((g.lambda - 0.5).abs() < 1e-15);
        assert!((g.charge() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ModelParams::new(-1.0, 1.0).is_err());
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, -0.5).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0).is_err());
        assert!(ModelParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn theta12_inverse_map_reference_points() {
        assert_eq!(mass_ratio_from_theta12(FRAC_PI_2).unwrap(), f64::INFINITY);
        let mu = mass_ratio_from_theta12(2.0 * PI / 3.0).unwrap();
        assert!((mu - 1.0).abs() < 1e-12);
        assert!(mass_ratio_from_theta12(0.4 * PI).is_err());
        assert!(mass_ratio_from_theta12(PI).is_err());
    }

    #[test]
    fn theta12_round_trip() {
        let theta = 0.6 * PI;
        let mu = mass_ratio_from_theta12(theta).unwrap();
        let g = geom(mu, 1.0);
        assert!((g.theta12 - theta).abs() < 1e-12);
        for mu in [0.1, 0.5, 1.0, 2.0, 10.0, 1000.0] {
            let theta = geom(mu, 1.0).theta12;
            let back = mass_ratio_from_theta12(theta).unwrap();
            assert!(
                ((back - mu) / mu).abs() < 1e-10,
                "mu {mu} came back as {back}"
            );
        }
    }

    #[test]
    fn angle_monotonicity_in_mass_ratio() {
        let mus = [0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0, 200.0, f64::INFINITY];
        for pair in mus.windows(2) {
            let a = geom(pair[0], 1.0);
            let b = geom(pair[1], 1.0);
            assert!(b.theta12 < a.theta12, "theta12 not decreasing at {pair:?}");
            assert!(b.theta23 > a.theta23, "theta23 not increasing at {pair:?}");
        }
    }

    #[test]
    fn unit_vector_identities() {
        for mu in [0.3, 1.0, 4.0, f64::INFINITY] {
            let g = geom(mu, 1.0);
            for a in g.unit_vectors {
                let norm = (a[0] * a[0] + a[1] * a[1]).sqrt();
                assert!((norm - 1.0).abs() < 1e-14);
            }
            let [a1, a2, a3] = g.unit_vectors;
            let dot12 = a1[0] * a2[0] + a1[1] * a2[1];
            let dot23 = a2[0] * a3[0] + a2[1] * a3[1];
            let dot13 = a1[0] * a3[0] + a1[1] * a3[1];
            assert!((dot12 - (0.25 - g.alpha_sq) / (g.nu * g.nu)).abs() < 1e-14);
            assert!((dot23 + 0.5 / g.nu).abs() < 1e-14);
            // θ₁₃ = θ₂₃ by the A₁ ↔ A₂ reflection symmetry.
            assert!((dot13 - dot23).abs() < 1e-14);
            assert!((g.theta12 - dot12.acos()).abs() < 1e-12);
        }
    }

    #[test]
    fn light_third_particle_opens_the_angle() {
        let g = geom(1e-4, 1.0);
        assert!(g.theta12 > 0.95 * PI);
    }

    #[test]
    fn energy_scale_reference_values() {
        let cases = [(1.0, 1.0, 0.5), (f64::INFINITY, 1.0, 1.0), (1.0, 2.0, 2.0)];
        for (mu, z, expected) in cases {
            let params = ModelParams::new(mu, z).unwrap();
            let g = derive_geometry(&params);
            let scale = energy_scale(&params, &g, None).unwrap();
            assert!(
                (scale.factor - expected).abs() < 1e-14,
                "mu={mu}, Z={z}: got {}",
                scale.factor
            );
        }
    }

    #[test]
    fn energy_scale_rejects_bad_units() {
        let params = ModelParams::new(1.0, 1.0).unwrap();
        let g = derive_geometry(&params);
        let bad = Units {
            hbar: 0.0,
            ..Default::default()
        };
        assert!(energy_scale(&params, &g, Some(bad)).is_err());
    }
}
