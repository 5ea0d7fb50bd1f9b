//! Executable verification suite.
//!
//! Every numerically checkable property of the pipeline gets a named check
//! producing a [`CheckReport`]: reference kernel values, parity-block sign
//! and monotonicity, positivity of the sectors without bound states, the
//! closed-form eigenvector and Hilbert–Schmidt bound of the scaled odd
//! kernel, the threshold-condition chain, the infinite-mass critical charge,
//! the zero-charge mass threshold, and agreement with the independent 2-D
//! finite-difference oracle.

pub mod oracle;

pub use oracle::{
    grid_oracle_ground_state, grid_oracle_with_couplings, odd_reflection_fraction,
    GridOracleConfig, OracleSolution,
};

use crate::critical;
use crate::error::Result;
use crate::geometry::{derive_geometry, ModelParams};
use crate::kernels::{self, KernelSpec, Parity};
use crate::operators::{self, assemble, eigen_symmetric};
use crate::quadrature::{build_grid, QuadratureConfig};
use crate::sectors::{self, SectorId, SolveConfig, K_THRESHOLD};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// Statement of the claim the check exercises.
    pub claim: String,
    /// Quantities produced by the run.
    pub computed: Vec<f64>,
    /// Reference values aligned with `computed`; empty for predicate-style
    /// checks.
    pub expected: Vec<f64>,
    /// Description of the pass condition when it is not plain
    /// `|computed - expected| <= tolerance`.
    pub predicate: Option<String>,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckReport {
    fn comparison(
        name: &str,
        claim: &str,
        computed: Vec<f64>,
        expected: Vec<f64>,
        tolerance: f64,
    ) -> Self {
        let passed = computed.len() == expected.len()
            && computed
                .iter()
                .zip(&expected)
                .all(|(c, e)| (c - e).abs() <= tolerance && c.is_finite());
        CheckReport {
            name: name.to_string(),
            claim: claim.to_string(),
            computed,
            expected,
            predicate: None,
            tolerance,
            passed,
        }
    }

    fn predicate(
        name: &str,
        claim: &str,
        computed: Vec<f64>,
        predicate: &str,
        tolerance: f64,
        passed: bool,
    ) -> Self {
        CheckReport {
            name: name.to_string(),
            claim: claim.to_string(),
            computed,
            expected: Vec::new(),
            predicate: Some(predicate.to_string()),
            tolerance,
            passed,
        }
    }
}

/// Configuration of the verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Half-line grid size for the operator-level checks.
    pub grid_n: usize,
    /// Quadrature tolerance for scalar integrals.
    pub quad_tol: f64,
    /// Finite-difference oracle configuration; `None` skips the (slow)
    /// oracle comparison.
    pub oracle: Option<GridOracleConfig>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            grid_n: 400,
            quad_tol: 1e-12,
            oracle: Some(GridOracleConfig {
                mesh: 301,
                ..Default::default()
            }),
        }
    }
}

fn grid(n: usize) -> Result<Arc<crate::quadrature::HalfLineGrid>> {
    Ok(Arc::new(build_grid(&QuadratureConfig::with_n(n))?))
}

/// Pointwise reference values of the kernels.
pub fn check_kernel_reference_values() -> CheckReport {
    let computed = vec![
        kernels::t0_symbol(0.0),
        kernels::t0_symbol(2.0f64.sqrt()),
        kernels::t_theta(2.0 * PI / 3.0, 0.0, 0.0).unwrap_or(f64::NAN),
        kernels::t_theta(FRAC_PI_2, 0.0, 0.0).unwrap_or(f64::NAN),
        kernels::tilde_kernel_mm(0.0, 0.0),
    ];
    let expected = vec![
        std::f64::consts::FRAC_1_SQRT_2,
        0.5,
        1.0 / (PI * 3.0f64.sqrt()),
        1.0 / (2.0 * PI),
        kernels::tilde_mm_origin_constant(),
    ];
    CheckReport::comparison(
        "kernel_reference_values",
        "diagonal symbol, angle kernels and the scaled odd kernel take their closed-form values",
        computed,
        expected,
        1e-14,
    )
}

/// Residual of the closed-form eigenvector of the scaled odd kernel and its
/// boundary value.
pub fn check_known_eigenvector(grid_n: usize) -> Result<CheckReport> {
    let g = grid(grid_n)?;
    let op = assemble(kernels::tilde_kernel_mm, &g, "tilde odd kernel")?;
    let f_vec: Vec<f64> = g
        .nodes()
        .iter()
        .zip(g.weights())
        .map(|(&p, &w)| w.sqrt() * kernels::tilde_mm_eigenvector(p))
        .collect();
    let mf = op.matrix().matvec(&f_vec);
    let norm_f: f64 = f_vec.iter().map(|x| x * x).sum::<f64>().sqrt();
    let residual: f64 = mf
        .iter()
        .zip(&f_vec)
        .map(|(a, b)| (a + b) * (a + b))
        .sum::<f64>()
        .sqrt()
        / norm_f;
    let boundary = kernels::tilde_mm_eigenvector(1e-6);
    let boundary_ref = 1.0 / (3.0 * 2.0f64.powf(1.25));
    let passed = residual <= 1e-4 && (boundary - boundary_ref).abs() <= 1e-6;
    Ok(CheckReport::predicate(
        "known_eigenvector",
        "the scaled odd kernel at equal masses has eigenvalue -1 with the closed-form \
         eigenvector f(p) = sqrt(1/sqrt(2) - (p^2+2)^(-1/2)) / (p(2p^2+3))",
        vec![residual, boundary, boundary_ref],
        "relative residual ||T f + f||/||f|| <= 1e-4 and f(0+) matches 1/(3*2^(5/4)) within 1e-6",
        1e-4,
        passed,
    ))
}

/// Hilbert–Schmidt norm of the scaled odd kernel lies in `[1.0, 1.02]`.
pub fn check_hs_bound() -> Result<CheckReport> {
    let value = operators::hs_norm(kernels::tilde_kernel_mm, 1e-7)?;
    let passed = (1.0..=1.02).contains(&value);
    Ok(CheckReport::predicate(
        "hs_bound",
        "the scaled odd kernel is Hilbert-Schmidt with norm at most 1.02, and at least 1 \
         because -1 is an eigenvalue",
        vec![value],
        "value in [1.0, 1.02]",
        0.0,
        passed,
    ))
}

/// Richardson extrapolation of the scaled odd kernel to the origin.
pub fn check_origin_constant() -> CheckReport {
    let v: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|&p| kernels::tilde_kernel_mm(p, p))
        .collect();
    // Quadratic error model: two Richardson levels over halved steps.
    let r1 = (4.0 * v[1] - v[0]) / 3.0;
    let r2 = (4.0 * v[2] - v[1]) / 3.0;
    let extrapolated = (16.0 * r2 - r1) / 15.0;
    let reference = kernels::tilde_mm_origin_constant();
    let mut report = CheckReport::comparison(
        "origin_constant",
        "the scaled odd kernel approaches -16*sqrt(2)/(3*sqrt(3)*pi) quadratically at the origin",
        vec![extrapolated, v[0]],
        vec![reference, reference],
        5e-3,
    );
    // The extrapolated value must be much closer than the raw samples.
    report.passed = report.passed && (extrapolated - reference).abs() <= 1e-3;
    report
}

/// Positivity of the three sectors without bound states, on a grid of mass
/// ratios and spectral parameters.
pub fn check_sector_positivity(grid_n: usize) -> Result<Vec<CheckReport>> {
    let g = grid(grid_n)?;
    let ks = [K_THRESHOLD + 1e-6, 0.8, 1.0, 2.0];
    let mut reports = Vec::new();
    for &mu in &[1.0, 2.0, 10.0, f64::INFINITY] {
        let params = ModelParams::new(mu, 1.0)?;
        let geometry = derive_geometry(&params);
        for sector in [SectorId::PM, SectorId::MP, SectorId::MM] {
            let skeleton = sectors::build_sector(&geometry, sector, &g)?;
            let mut mins = Vec::with_capacity(ks.len());
            for &k in &ks {
                let op = sectors::evaluate(&skeleton, k)?;
                mins.push(eigen_symmetric(&op, false)?.min());
            }
            let passed = match sector {
                SectorId::PM | SectorId::MP => mins
                    .iter()
                    .zip(&ks)
                    .all(|(min, k)| *min >= k - K_THRESHOLD - 1e-6),
                _ => mins.iter().all(|min| *min >= -1e-6),
            };
            let predicate = match sector {
                SectorId::PM | SectorId::MP => {
                    "min eig S(k) >= k - 1/sqrt(2) - 1e-6 at k in {threshold+1e-6, 0.8, 1.0, 2.0}"
                }
                _ => "min eig S(k) >= -1e-6 at k in {threshold+1e-6, 0.8, 1.0, 2.0}",
            };
            reports.push(CheckReport::predicate(
                &format!("sector_positivity[{sector}, mu={mu}]"),
                "sectors odd in the second coordinate, and the doubly odd sector for a \
                 heavy-or-equal center, carry no bound states: their skeletons stay nonnegative",
                mins,
                predicate,
                1e-6,
                passed,
            ));
        }
    }
    // Out-of-hypothesis case: reported, never asserted.
    let params = ModelParams::new(0.5, 1.0)?;
    let geometry = derive_geometry(&params);
    let skeleton = sectors::build_sector(&geometry, SectorId::MM, &g)?;
    let min = eigen_symmetric(&sectors::evaluate(&skeleton, K_THRESHOLD + 1e-6)?, false)?.min();
    reports.push(CheckReport::predicate(
        "sector_positivity[MM, mu=0.5]",
        "doubly odd sector below equal masses: recorded for information only",
        vec![min],
        "report-only (no assertion outside the proven mass range)",
        0.0,
        true,
    ));
    Ok(reports)
}

/// Sign and monotonicity of the parity blocks across angles, with a
/// two-resolution error gate.
pub fn check_block_monotonicity(grid_n: usize) -> Result<CheckReport> {
    let thetas = [
        FRAC_PI_2,
        0.55 * PI,
        0.6 * PI,
        2.0 * PI / 3.0,
        0.7 * PI,
        0.75 * PI,
    ];
    let coarse = grid(grid_n)?;
    let fine = grid(2 * grid_n)?;
    let mut sup_plus = Vec::new();
    let mut inf_minus = Vec::new();
    let mut resolution_err: f64 = 0.0;
    let mut signs_ok = true;
    for &theta in &thetas {
        let even = KernelSpec::new(theta, Parity::Even)?;
        let odd = KernelSpec::new(theta, Parity::Odd)?;
        let mut values = [0.0; 4];
        for (slot, g) in [(0, &coarse), (2, &fine)] {
            let spec_even = eigen_symmetric(&assemble(|p, q| even.eval(p, q), g, "T+")?, false)?;
            let spec_odd = eigen_symmetric(&assemble(|p, q| odd.eval(p, q), g, "T-")?, false)?;
            signs_ok = signs_ok && spec_even.min() >= -1e-10 && spec_odd.max() <= 1e-10;
            values[slot] = spec_even.max();
            values[slot + 1] = spec_odd.min();
        }
        resolution_err = resolution_err
            .max((values[0] - values[2]).abs())
            .max((values[1] - values[3]).abs());
        sup_plus.push(values[2]);
        inf_minus.push(values[3]);
    }
    let margin = 10.0 * resolution_err;
    // sup T+ strictly increases with the angle; inf T- strictly decreases
    // (both extremes move away from zero as the lines close up).
    let monotone = sup_plus.windows(2).all(|w| w[1] - w[0] > margin)
        && inf_minus.windows(2).all(|w| w[0] - w[1] > margin);
    let mut computed = sup_plus;
    computed.extend(inf_minus);
    computed.push(resolution_err);
    Ok(CheckReport::predicate(
        "block_sign_and_monotonicity",
        "even parity blocks are nonnegative and odd blocks nonpositive; their extreme \
         eigenvalues move strictly monotonically as the angle opens",
        computed,
        "signs within 1e-10 of the half plane; adjacent-angle gaps exceed 10x the \
         two-resolution error estimate",
        1e-10,
        monotone && signs_ok,
    ))
}

/// A negative threshold eigenvalue produces a zero crossing above the
/// threshold (reference case: infinite mass ratio, unit charge).
pub fn check_threshold_root_existence(grid_n: usize) -> Result<CheckReport> {
    let params = ModelParams::new(f64::INFINITY, 1.0)?;
    let geometry = derive_geometry(&params);
    let g = grid(grid_n)?;
    let skeleton = sectors::build_sector(&geometry, SectorId::PP, &g)?;
    let threshold_min = eigen_symmetric(&sectors::evaluate(&skeleton, K_THRESHOLD)?, false)?.min();
    let states = sectors::solve_bound_states(&skeleton, 1.5, 1e-12)?;
    let k_star = states.first().map_or(f64::NAN, |s| s.k_star);
    let passed = threshold_min < 0.0 && k_star > K_THRESHOLD;
    Ok(CheckReport::predicate(
        "threshold_root_existence",
        "a negative bottom eigenvalue of the symmetric skeleton at the threshold forces a \
         kernel above it (analytic family argument), i.e. a bound state",
        vec![threshold_min, k_star],
        "min eig S(1/sqrt(2)) < 0 and a root k* > 1/sqrt(2) is found",
        0.0,
        passed,
    ))
}

/// Threshold-condition chain at one geometry: positive threshold kernel at
/// a super-critical charge, negative skeleton bottom, and a located root.
pub fn check_threshold_condition_chain(
    mass_ratio: f64,
    charge_factor: f64,
    eig_grid_n: usize,
    solve_grid_n: usize,
) -> Result<CheckReport> {
    let critical_point = critical::z_critical_ub_for_mass_ratio(mass_ratio, 1e-12)?;
    let z = critical_point.z_c_ub * charge_factor;
    let params = ModelParams::new(mass_ratio, z)?;
    let geometry = derive_geometry(&params);
    let k00 = critical::k00(&geometry, 1e-13)?;

    let g_eig = grid(eig_grid_n)?;
    let skeleton = sectors::build_sector(&geometry, SectorId::PP, &g_eig)?;
    let threshold_min = eigen_symmetric(&sectors::evaluate(&skeleton, K_THRESHOLD)?, false)?.min();

    let g_solve = grid(solve_grid_n)?;
    let solve_skeleton = sectors::build_sector(&geometry, SectorId::PP, &g_solve)?;
    // Binding is weak at a barely super-critical charge, so the root sits
    // just above the threshold; a short scan suffices.
    let states = sectors::solve_bound_states_with(
        &solve_skeleton,
        &SolveConfig {
            k_max: 0.8,
            scan_step: 0.002,
            tol: 1e-12,
            ..Default::default()
        },
    )?;
    let k_star = states.first().map_or(f64::NAN, |s| s.k_star);
    let passed = k00.value > 0.0 && threshold_min < 0.0 && k_star > K_THRESHOLD;
    Ok(CheckReport::predicate(
        &format!("threshold_condition_chain[mu={mass_ratio}]"),
        "a positive threshold kernel at the origin lowers the symmetric skeleton below zero \
         and guarantees a bound state",
        vec![z, k00.value, threshold_min, k_star],
        "K(0,0) > 0, min eig S(1/sqrt(2)) < 0, and a root k* > 1/sqrt(2) is found",
        0.0,
        passed,
    ))
}

/// The infinite-mass critical charge against its 20-digit reference value.
pub fn check_infinite_mass_critical_charge() -> Result<CheckReport> {
    let point = critical::z_critical_ub(FRAC_PI_2, 1e-13)?;
    #[allow(clippy::excessive_precision)]
    let reference = 0.374_903_477_470_005_932_78;
    Ok(CheckReport::comparison(
        "infinite_mass_critical_charge",
        "the critical-charge upper bound at right angle (infinite mass ratio) equals \
         0.37490347747000593278... ",
        vec![point.z_c_ub],
        vec![reference],
        1e-10,
    ))
}

/// The zero-charge mass threshold lands in the published window.
pub fn check_zero_charge_mass_threshold() -> Result<CheckReport> {
    let mu_star = critical::zero_charge_mass_threshold(1e-6)?;
    let passed = (0.46..=0.50).contains(&mu_star);
    Ok(CheckReport::predicate(
        "zero_charge_mass_threshold",
        "below a mass ratio near 0.48 an arbitrarily small positive charge binds the two \
         identical particles",
        vec![mu_star],
        "threshold within [0.46, 0.50]",
        0.02,
        passed,
    ))
}

/// Skeleton ground state vs the finite-difference oracle (5% gate).
pub fn check_oracle_agreement(
    grid_n: usize,
    oracle_config: &GridOracleConfig,
) -> Result<CheckReport> {
    let params = ModelParams::new(f64::INFINITY, 1.0)?;
    let geometry = derive_geometry(&params);
    let g = grid(grid_n)?;
    let skeleton = sectors::build_sector(&geometry, SectorId::PP, &g)?;
    let states = sectors::solve_bound_states(&skeleton, 1.5, 1e-12)?;
    let skeleton_energy = states.first().map_or(f64::NAN, |s| s.energy_dimensionless);
    let fd_energy = grid_oracle_ground_state(&params, oracle_config)?;
    let rel = ((fd_energy - skeleton_energy) / skeleton_energy).abs();
    Ok(CheckReport::predicate(
        "grid_oracle_agreement",
        "the skeleton root reproduces the 2-D finite-difference ground-state energy of the \
         reference configuration",
        vec![skeleton_energy, fd_energy, rel],
        "relative disagreement at most 5%",
        0.05,
        rel <= 0.05 && skeleton_energy < -0.5,
    ))
}

/// Run the whole suite. The returned reports carry pass/fail per check;
/// process exit status is the caller's concern.
pub fn run_all(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let mut reports = vec![check_kernel_reference_values()];
    reports.push(check_block_monotonicity(config.grid_n.min(200))?);
    reports.extend(check_sector_positivity(config.grid_n)?);
    reports.push(check_known_eigenvector(config.grid_n)?);
    reports.push(check_hs_bound()?);
    reports.push(check_origin_constant());
    reports.push(check_threshold_root_existence(200)?);
    reports.push(check_threshold_condition_chain(1.0, 1.05, 800, 400)?);
    reports.push(check_infinite_mass_critical_charge()?);
    reports.push(check_zero_charge_mass_threshold()?);
    if let Some(oracle_config) = &config.oracle {
        reports.push(check_oracle_agreement(200, oracle_config)?);
    }
    Ok(reports)
}

/// True when every report passed.
pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_reference_check_passes() {
        assert!(check_kernel_reference_values().passed);
    }

    #[test]
    fn eigenvector_check_passes_at_400() {
        let report = check_known_eigenvector(400).unwrap();
        assert!(report.passed, "residual {:?}", report.computed);
    }

    #[test]
    fn eigenvector_boundary_value() {
        let f = kernels::tilde_mm_eigenvector(1e-6);
        assert!((f - 1.0 / (3.0 * 2.0f64.powf(1.25))).abs() < 1e-6);
        // Closed-form value at p = 1: sqrt(1/sqrt(2) - 1/sqrt(3)) / 5.
        let f1 = kernels::tilde_mm_eigenvector(1.0);
        let reference = (std::f64::consts::FRAC_1_SQRT_2 - 1.0 / 3.0f64.sqrt()).sqrt() / 5.0;
        assert!((f1 - reference).abs() < 1e-15, "f(1) = {f1:.15}");
    }

    #[test]
    fn origin_constant_check_passes() {
        let report = check_origin_constant();
        assert!(report.passed, "{:?}", report.computed);
        // Quadratic error model: residual shrinks about 4x per halving.
        let c = kernels::tilde_mm_origin_constant();
        let e1 = (kernels::tilde_kernel_mm(1e-2, 1e-2) - c).abs();
        let e2 = (kernels::tilde_kernel_mm(5e-3, 5e-3) - c).abs();
        let e3 = (kernels::tilde_kernel_mm(2.5e-3, 2.5e-3) - c).abs();
        assert!(e1 / e2 > 3.5 && e1 / e2 < 4.5, "ratio {}", e1 / e2);
        assert!(e2 / e3 > 3.5 && e2 / e3 < 4.5, "ratio {}", e2 / e3);
        // The 1e-2 sample alone is already within 5e-3.
        assert!(e1 <= 5e-3);
    }

    #[test]
    fn block_monotonicity_check_passes() {
        let report = check_block_monotonicity(100).unwrap();
        assert!(report.passed, "{:?}", report.computed);
    }

    #[test]
    fn sector_positivity_checks_pass() {
        let reports = check_sector_positivity(200).unwrap();
        assert_eq!(reports.len(), 13);
        for r in &reports {
            assert!(r.passed, "{} failed: {:?}", r.name, r.computed);
        }
    }

    #[test]
    fn degraded_resolution_is_named_not_hidden() {
        // With a deliberately coarse grid the suite may degrade; whatever
        // happens, the failing checks must be identifiable by name.
        let reports = check_sector_positivity(64).unwrap();
        for r in &reports {
            assert!(!r.name.is_empty());
            if !r.passed {
                assert!(r.name.contains("sector_positivity"));
            }
        }
    }
}
