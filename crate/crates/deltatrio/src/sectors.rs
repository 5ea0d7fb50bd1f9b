//! The four effective skeletons and the bound-state condition.
//!
//! In each symmetry sector the spectral problem below the two-body threshold
//! reduces to a single half-line operator family `S(k)`, `k > 1/√2`:
//!
//! - `PP`/`MP`: `S(k) = (k - T₀) - T₁₂^± + 2·T₂₃^±·(T₀ + k/λ)⁻¹·T₂₃^±`
//! - `PM`/`MM`: `S(k) = (k - T₀) + T₁₂^±`
//!
//! with even blocks for `PP`/`PM` and odd blocks for `MP`/`MM`. `E = -k²`
//! is an eigenvalue of the reduced Hamiltonian exactly when `S(k)` has a
//! nontrivial kernel, with multiplicity equal to the kernel dimension, so
//! bound states are zero crossings of eigenvalue branches of `S(k)`.

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::kernels::{self, KernelSpec, Parity};
use crate::operators::{self, DiscretizedOperator, Spectrum};
use crate::quadrature::HalfLineGrid;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

/// Bottom of the essential spectrum is `-1/2`; bound states have
/// `E = -k² < -1/2`, i.e. `k` above this threshold.
pub const K_THRESHOLD: f64 = FRAC_1_SQRT_2;

/// Sector labels, named after the two parity signs of the reduced operator
/// family (momentum parity, channel-exchange parity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorId {
    /// `(+,+)`: even blocks with the third-channel coupling; hosts the
    /// ground state. Subspace: even in x, even in y.
    PP,
    /// `(-,+)`: odd blocks with the third-channel coupling. Subspace: even
    /// in x, odd in y.
    MP,
    /// `(+,-)`: even block, no third channel. Subspace: odd in x, odd in y.
    PM,
    /// `(-,-)`: odd block, no third channel. Subspace: odd in x, even in y.
    MM,
}

impl SectorId {
    pub fn all() -> [SectorId; 4] {
        [SectorId::PP, SectorId::MP, SectorId::PM, SectorId::MM]
    }

    /// Parity of the `T₁₂` (and, when present, `T₂₃`) blocks.
    pub fn block_parity(self) -> Parity {
        match self {
            SectorId::PP | SectorId::PM => Parity::Even,
            SectorId::MP | SectorId::MM => Parity::Odd,
        }
    }

    /// Whether the skeleton carries the `T₂₃`-resolvent (Schur) term.
    pub fn has_third_channel(self) -> bool {
        matches!(self, SectorId::PP | SectorId::MP)
    }

    /// The parity subspace of the 2-D problem this sector detects,
    /// as (x-parity, y-parity). Note the crossed pairing.
    pub fn position_parities(self) -> (Parity, Parity) {
        match self {
            SectorId::PP => (Parity::Even, Parity::Even),
            SectorId::MP => (Parity::Even, Parity::Odd),
            SectorId::PM => (Parity::Odd, Parity::Odd),
            SectorId::MM => (Parity::Odd, Parity::Even),
        }
    }
}

impl std::fmt::Display for SectorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SectorId::PP => "PP",
            SectorId::MP => "MP",
            SectorId::PM => "PM",
            SectorId::MM => "MM",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SectorId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PP" | "++" => Ok(SectorId::PP),
            "MP" | "-+" => Ok(SectorId::MP),
            "PM" | "+-" => Ok(SectorId::PM),
            "MM" | "--" => Ok(SectorId::MM),
            other => Err(Error::invalid(format!(
                "unknown sector '{other}' (expected PP, MP, PM or MM)"
            ))),
        }
    }
}

/// Assembled, `k`-independent pieces of one sector's skeleton.
#[derive(Debug, Clone)]
pub struct SectorSkeleton {
    sector: SectorId,
    t0_diag: Vec<f64>,
    t12: DiscretizedOperator,
    t23: Option<DiscretizedOperator>,
    lambda: f64,
    grid: Arc<HalfLineGrid>,
    geometry: Geometry,
}

impl SectorSkeleton {
    pub fn sector(&self) -> SectorId {
        self.sector
    }

    pub fn grid(&self) -> &Arc<HalfLineGrid> {
        &self.grid
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn t0_diag(&self) -> &[f64] {
        &self.t0_diag
    }

    pub fn t12_block(&self) -> &DiscretizedOperator {
        &self.t12
    }

    pub fn t23_block(&self) -> Option<&DiscretizedOperator> {
        self.t23.as_ref()
    }

    /// Entries of the resolvent diagonal `(t0(p_i) + k/λ)⁻¹`.
    pub fn resolvent_diag(&self, k: f64) -> Vec<f64> {
        self.t0_diag
            .iter()
            .map(|t0| 1.0 / (t0 + k / self.lambda))
            .collect()
    }
}

/// Assemble the blocks of one sector's skeleton for the given geometry.
pub fn build_sector(
    geometry: &Geometry,
    sector: SectorId,
    grid: &Arc<HalfLineGrid>,
) -> Result<SectorSkeleton> {
    if !(geometry.lambda.is_finite() && geometry.lambda > 0.0) {
        return Err(Error::invalid(format!(
            "coupling lambda must be positive, got {}",
            geometry.lambda
        )));
    }
    let parity = sector.block_parity();
    let spec12 = KernelSpec::new(geometry.theta12, parity)?;
    let t12 = operators::assemble(|p, q| spec12.eval(p, q), grid, format!("T12[{sector}]"))?;
    let t23 = if sector.has_third_channel() {
        let spec23 = KernelSpec::new(geometry.theta23, parity)?;
        Some(operators::assemble(
            |p, q| spec23.eval(p, q),
            grid,
            format!("T23[{sector}]"),
        )?)
    } else {
        None
    };
    let t0_diag = grid
        .nodes()
        .iter()
        .map(|&p| kernels::t0_symbol(p))
        .collect();
    Ok(SectorSkeleton {
        sector,
        t0_diag,
        t12,
        t23,
        lambda: geometry.lambda,
        grid: Arc::clone(grid),
        geometry: *geometry,
    })
}

/// Evaluate the skeleton matrix `S(k)`. `k` may sit exactly at the
/// threshold `1/√2` (useful for threshold diagnostics); anything below is a
/// domain error.
pub fn evaluate(skeleton: &SectorSkeleton, k: f64) -> Result<DiscretizedOperator> {
    if !(k.is_finite() && k >= K_THRESHOLD) {
        return Err(Error::invalid(format!(
            "k must satisfy k >= 1/sqrt(2) = {K_THRESHOLD:.12}, got {k}"
        )));
    }
    let n = skeleton.grid.len();
    let mut m = skeleton.t12.matrix().clone();
    let sign = if skeleton.sector.has_third_channel() {
        -1.0
    } else {
        1.0
    };
    m.scale_in_place(sign);
    if let Some(t23) = &skeleton.t23 {
        let d = skeleton.resolvent_diag(k);
        let mut schur = t23.matrix().sandwich_diag(&d);
        schur.scale_in_place(2.0);
        m.add_in_place(&schur);
    }
    for i in 0..n {
        m[(i, i)] += k - skeleton.t0_diag[i];
    }
    DiscretizedOperator::from_parts(
        m,
        Arc::clone(&skeleton.grid),
        format!("S[{}](k={k:.9})", skeleton.sector),
    )
}

/// Ascending eigenvalues of `S(k)` along a list of `k` values, computed in
/// parallel. Used for diagnostics and root bracketing.
#[derive(Debug, Clone)]
pub struct EigenvalueCurve {
    pub points: Vec<(f64, Vec<f64>)>,
}

impl EigenvalueCurve {
    pub fn min_eigenvalues(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|(k, ev)| (*k, ev[0])).collect()
    }

    /// Largest observed branch slope `|Δλ|/|Δk|` between adjacent points;
    /// a continuity diagnostic for the sorted-order branch pairing.
    pub fn max_branch_slope(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.points.windows(2) {
            let (ka, ea) = &w[0];
            let (kb, eb) = &w[1];
            let dk = (kb - ka).abs().max(f64::MIN_POSITIVE);
            for (a, b) in ea.iter().zip(eb) {
                worst = worst.max((b - a).abs() / dk);
            }
        }
        worst
    }
}

pub fn min_eigenvalue_curve(
    skeleton: &SectorSkeleton,
    k_values: &[f64],
) -> Result<EigenvalueCurve> {
    let points: Result<Vec<(f64, Vec<f64>)>> = k_values
        .par_iter()
        .map(|&k| {
            let spectrum = spectrum_at(skeleton, k, false)?;
            Ok((k, spectrum.eigenvalues))
        })
        .collect();
    Ok(EigenvalueCurve { points: points? })
}

fn spectrum_at(skeleton: &SectorSkeleton, k: f64, want_vectors: bool) -> Result<Spectrum> {
    let op = evaluate(skeleton, k)?;
    operators::eigen_symmetric(&op, want_vectors)
}

/// One detected bound state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundStateResult {
    pub sector: SectorId,
    /// Root of the skeleton condition; `k_star > 1/√2`.
    pub k_star: f64,
    /// Eigenvalue of the dimensionless reduced operator, `-k_star²`.
    pub energy_dimensionless: f64,
    /// Eigenvalue scaled back to `ħ = m = e = 1` units,
    /// `-k_star²/(2λ²)`.
    pub energy_physical: f64,
    /// Number of skeleton eigenvalues inside the degeneracy window at the
    /// root.
    pub multiplicity: usize,
    /// Skeleton-channel eigenfunction values at the grid nodes, normalized
    /// to unit quadrature norm with a positive dominant component.
    pub eigenvector_samples: Vec<f64>,
}

/// Knobs for the bound-state scan.
#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    /// Upper end of the scan (ground states sit at the largest `k`).
    pub k_max: f64,
    /// Lower end; defaults to just above the threshold.
    pub k_min: Option<f64>,
    /// Scan step for bracketing sign changes.
    pub scan_step: f64,
    /// Bisection stops once the branch eigenvalue magnitude drops below
    /// this tolerance.
    pub tol: f64,
    /// Eigenvalues within `multiplicity_window_factor · tol` of zero at the
    /// root count toward the multiplicity.
    pub multiplicity_window_factor: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            k_max: 10.0,
            k_min: None,
            scan_step: 0.01,
            tol: 1e-12,
            multiplicity_window_factor: 10.0,
        }
    }
}

/// Find all bound states of one sector with default scanning, up to `k_max`.
pub fn solve_bound_states(
    skeleton: &SectorSkeleton,
    k_max: f64,
    tol: f64,
) -> Result<Vec<BoundStateResult>> {
    solve_bound_states_with(
        skeleton,
        &SolveConfig {
            k_max,
            tol,
            ..Default::default()
        },
    )
}

/// Find all `k` in the scan range where an eigenvalue branch of `S(k)`
/// crosses zero: scan a descending `k` grid, bracket every sign change of
/// every sorted eigenvalue position, and bisect each bracket. Results are
/// sorted by descending `k` (ground state first). An empty result is a
/// valid outcome: the sector has no bound state in range.
pub fn solve_bound_states_with(
    skeleton: &SectorSkeleton,
    config: &SolveConfig,
) -> Result<Vec<BoundStateResult>> {
    let k_min = config.k_min.unwrap_or(K_THRESHOLD + 1e-9);
    if config.k_max.is_nan() || config.k_max <= K_THRESHOLD {
        return Err(Error::invalid(format!(
            "k_max must exceed the threshold 1/sqrt(2), got {}",
            config.k_max
        )));
    }
    if !(k_min >= K_THRESHOLD && k_min < config.k_max) {
        return Err(Error::invalid(format!(
            "k_min must lie in [threshold, k_max), got {k_min}"
        )));
    }
    if !(config.scan_step > 0.0 && config.tol > 0.0) {
        return Err(Error::invalid(
            "scan_step and tol must be positive".to_string(),
        ));
    }
    // Descending scan grid, ending exactly at k_min.
    let mut ks = Vec::new();
    let mut k = config.k_max;
    while k > k_min {
        ks.push(k);
        k -= config.scan_step;
    }
    ks.push(k_min);

    let spectra: Result<Vec<Vec<f64>>> = ks
        .par_iter()
        .map(|&k| Ok(spectrum_at(skeleton, k, false)?.eigenvalues))
        .collect();
    let spectra = spectra?;
    let n_branches = spectra.first().map_or(0, Vec::len);

    // Bracket sign changes per sorted eigenvalue position.
    let mut brackets: Vec<(usize, f64, f64)> = Vec::new();
    for j in 0..n_branches {
        for i in 0..ks.len() - 1 {
            let (fa, fb) = (spectra[i][j], spectra[i + 1][j]);
            if fa == 0.0 {
                brackets.push((j, ks[i], ks[i]));
            } else if fa.signum() != fb.signum() {
                brackets.push((j, ks[i], ks[i + 1]));
            }
        }
    }

    let roots: Result<Vec<f64>> = brackets
        .par_iter()
        .map(|&(j, ka, kb)| bisect_branch(skeleton, j, ka, kb, config.tol))
        .collect();
    let mut roots = roots?;
    roots.sort_by(|a, b| b.total_cmp(a));
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);

    let window = config.multiplicity_window_factor * config.tol;
    let mut results = Vec::with_capacity(roots.len());
    for k_star in roots {
        let spectrum = spectrum_at(skeleton, k_star, true)?;
        let multiplicity = spectrum
            .eigenvalues
            .iter()
            .filter(|ev| ev.abs() <= window)
            .count()
            .max(1);
        // Column of the eigenvalue closest to zero.
        let (idx, _) = spectrum
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("non-empty spectrum");
        let vectors = spectrum.eigenvectors.as_ref().expect("vectors requested");
        let mut samples: Vec<f64> = vectors
            .column(idx)
            .iter()
            .zip(skeleton.grid.weights())
            .map(|(v, w)| v / w.sqrt())
            .collect();
        let dominant = samples
            .iter()
            .cloned()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        if dominant < 0.0 {
            for s in &mut samples {
                *s = -*s;
            }
        }
        let energy = -k_star * k_star;
        results.push(BoundStateResult {
            sector: skeleton.sector,
            k_star,
            energy_dimensionless: energy,
            energy_physical: energy / (2.0 * skeleton.lambda * skeleton.lambda),
            multiplicity,
            eigenvector_samples: samples,
        });
    }
    Ok(results)
}

/// Bisect the sign change of the `j`-th sorted eigenvalue branch. `ka` and
/// `kb` bracket the change (`ka > kb` from the descending scan).
fn bisect_branch(skeleton: &SectorSkeleton, j: usize, ka: f64, kb: f64, tol: f64) -> Result<f64> {
    let branch = |k: f64| -> Result<f64> { Ok(spectrum_at(skeleton, k, false)?.eigenvalues[j]) };
    let (mut lo, mut hi) = (kb.min(ka), kb.max(ka));
    let mut f_lo = branch(lo)?;
    if f_lo.abs() <= tol {
        return Ok(lo);
    }
    let mut best = 0.5 * (lo + hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = branch(mid)?;
        best = mid;
        if f_mid.abs() <= tol {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{derive_geometry, ModelParams};
    use crate::quadrature::{build_grid, QuadratureConfig};
    use std::f64::consts::PI;

    fn skeleton(mu: f64, z: f64, sector: SectorId, n: usize) -> SectorSkeleton {
        let params = ModelParams::new(mu, z).unwrap();
        let geometry = derive_geometry(&params);
        let grid = Arc::new(build_grid(&QuadratureConfig::with_n(n)).unwrap());
        build_sector(&geometry, sector, &grid).unwrap()
    }

    #[test]
    fn sector_ids_parse_and_display() {
        for s in SectorId::all() {
            let round: SectorId = s.to_string().parse().unwrap();
            assert_eq!(round, s);
        }
        assert_eq!("++".parse::<SectorId>().unwrap(), SectorId::PP);
        assert!("XX".parse::<SectorId>().is_err());
    }

    #[test]
    fn build_respects_sector_structure() {
        let pp = skeleton(1.0, 1.0, SectorId::PP, 40);
        assert!(pp.t23_block().is_some());
        assert_eq!(pp.sector().block_parity(), Parity::Even);
        let pm = skeleton(1.0, 1.0, SectorId::PM, 40);
        assert!(pm.t23_block().is_none());
        let mm = skeleton(f64::INFINITY, 1.0, SectorId::MM, 40);
        assert!(mm.t23_block().is_none());
        assert_eq!(mm.sector().block_parity(), Parity::Odd);
        // Odd kernel at theta12 = pi/2 vanishes up to the rounding of
        // cos(pi/2) in f64.
        assert!(mm.t12_block().matrix().max_abs() < 1e-16);
    }

    #[test]
    fn equal_mass_blocks_coincide() {
        // At mu = 1 both angles equal 2π/3, so matching-parity blocks are
        // entrywise identical.
        for sector in [SectorId::PP, SectorId::MP] {
            let sk = skeleton(1.0, 1.0, sector, 60);
            let t12 = sk.t12_block().matrix();
            let t23 = sk.t23_block().unwrap().matrix();
            assert_eq!(t12, t23);
        }
    }

    #[test]
    fn evaluate_rejects_subthreshold_k() {
        let sk = skeleton(1.0, 1.0, SectorId::PM, 20);
        assert!(evaluate(&sk, 0.5).is_err());
        assert!(evaluate(&sk, K_THRESHOLD).is_ok());
    }

    #[test]
    fn pm_sector_is_uniformly_positive() {
        let sk = skeleton(1.0, 1.0, SectorId::PM, 100);
        let op = evaluate(&sk, 1.0).unwrap();
        let min = operators::eigen_symmetric(&op, false).unwrap().min();
        assert!(min >= 1.0 - K_THRESHOLD - 1e-8, "min {min}");
    }

    #[test]
    fn mp_sector_is_uniformly_positive() {
        let sk = skeleton(2.0, 1.0, SectorId::MP, 100);
        let op = evaluate(&sk, 0.8).unwrap();
        let min = operators::eigen_symmetric(&op, false).unwrap().min();
        assert!(min >= 0.8 - K_THRESHOLD - 1e-8, "min {min}");
    }

    #[test]
    fn weak_charge_limit_of_the_resolvent_term() {
        // As Z → 0 the resolvent diagonal tends to 1/t0, entrywise.
        let sk = skeleton(1.0, 1e-12, SectorId::PP, 40);
        let d = sk.resolvent_diag(K_THRESHOLD);
        for (d_i, t0_i) in d.iter().zip(sk.t0_diag()) {
            assert!((d_i * t0_i - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn resolvent_diag_grows_as_charge_shrinks() {
        let strong = skeleton(1.0, 1.0, SectorId::PP, 30);
        let weak = skeleton(1.0, 0.5, SectorId::PP, 30);
        let d_strong = strong.resolvent_diag(1.0);
        let d_weak = weak.resolvent_diag(1.0);
        for (a, b) in d_strong.iter().zip(&d_weak) {
            assert!(b > a);
        }
    }

    #[test]
    fn min_eigenvalue_rises_as_charge_shrinks() {
        for &k in &[K_THRESHOLD + 1e-6, 0.85, 1.3] {
            let mut prev = f64::NEG_INFINITY;
            for z in [2.0, 1.0, 0.5, 0.25] {
                let sk = skeleton(1.0, z, SectorId::PP, 80);
                let min = operators::eigen_symmetric(&evaluate(&sk, k).unwrap(), false)
                    .unwrap()
                    .min();
                assert!(
                    min >= prev - 1e-12,
                    "k={k}: min eig decreased from {prev} to {min} as Z shrank"
                );
                prev = min;
            }
        }
    }

    #[test]
    fn large_k_spectrum_is_positive() {
        let sk = skeleton(f64::INFINITY, 1.0, SectorId::PP, 80);
        let curve = min_eigenvalue_curve(&sk, &[5.0]).unwrap();
        assert!(curve.points[0].1.iter().all(|&ev| ev > 0.0));
    }

    #[test]
    fn supercritical_charge_dips_below_zero_near_threshold() {
        // Z = 1 far exceeds the critical charge at infinite mass ratio, so
        // the symmetric skeleton is already negative just above threshold.
        let sk = skeleton(f64::INFINITY, 1.0, SectorId::PP, 120);
        let min = operators::eigen_symmetric(&evaluate(&sk, K_THRESHOLD + 1e-3).unwrap(), false)
            .unwrap()
            .min();
        assert!(min < 0.0, "min {min}");
    }

    #[test]
    fn pm_curve_stays_above_the_gap() {
        let sk = skeleton(1.0, 1.0, SectorId::PM, 80);
        let ks = [0.72, 0.8, 1.0, 1.5, 2.5];
        let curve = min_eigenvalue_curve(&sk, &ks).unwrap();
        for (k, ev) in &curve.points {
            assert!(ev[0] >= k - K_THRESHOLD - 1e-8);
        }
    }

    #[test]
    fn branch_slopes_are_moderate() {
        let sk = skeleton(f64::INFINITY, 1.0, SectorId::PP, 60);
        let ks: Vec<f64> = (0..20).map(|i| 0.72 + 0.05 * i as f64).collect();
        let curve = min_eigenvalue_curve(&sk, &ks).unwrap();
        // S(k) ~ k·I at large k; branch slopes stay O(1).
        assert!(curve.max_branch_slope() < 10.0);
    }

    #[test]
    fn reference_case_has_a_bound_state() {
        let sk = skeleton(f64::INFINITY, 1.0, SectorId::PP, 200);
        let states = solve_bound_states(&sk, 2.0, 1e-12).unwrap();
        assert!(!states.is_empty());
        let ground = &states[0];
        assert!(ground.k_star > K_THRESHOLD);
        assert!(ground.energy_dimensionless < -0.5);
        assert!(ground.multiplicity >= 1);
        assert_eq!(ground.eigenvector_samples.len(), 200);
        // Physical energy at Z = 1, mu = inf: scale factor is 1.
        assert!(
            (ground.energy_physical - ground.energy_dimensionless).abs() < 1e-12,
            "lambda = nu at Z=1"
        );
    }

    #[test]
    fn odd_sectors_are_empty_for_heavy_center() {
        for sector in [SectorId::PM, SectorId::MP, SectorId::MM] {
            let sk = skeleton(1.0, 1.0, sector, 100);
            let states = solve_bound_states(&sk, 2.5, 1e-10).unwrap();
            assert!(states.is_empty(), "{sector} unexpectedly bound");
        }
    }

    #[test]
    fn vanishing_charge_binds_nothing_for_heavy_center() {
        let sk = skeleton(f64::INFINITY, 0.01, SectorId::PP, 100);
        let states = solve_bound_states(&sk, 2.0, 1e-10).unwrap();
        assert!(states.is_empty());
        // Cross-check: the skeleton is already nonnegative at the threshold.
        let min = operators::eigen_symmetric(&evaluate(&sk, K_THRESHOLD + 1e-9).unwrap(), false)
            .unwrap()
            .min();
        assert!(min >= 0.0, "min {min}");
    }

    #[test]
    fn light_center_mm_sector_is_reported_not_asserted() {
        // Below mu = 1 no positivity statement is available for MM; the
        // solver must still run and return a well-formed answer.
        let sk = skeleton(0.5, 1.0, SectorId::MM, 60);
        let states = solve_bound_states(&sk, 1.5, 1e-10).unwrap();
        for s in &states {
            assert!(s.k_star > K_THRESHOLD);
        }
    }

    #[test]
    fn ground_state_k_converges_in_grid_size() {
        let coarse = skeleton(f64::INFINITY, 1.0, SectorId::PP, 200);
        let fine = skeleton(f64::INFINITY, 1.0, SectorId::PP, 400);
        let k_coarse = solve_bound_states(&coarse, 1.5, 1e-12).unwrap()[0].k_star;
        let window = SolveConfig {
            k_max: k_coarse + 0.05,
            k_min: Some(k_coarse - 0.05),
            scan_step: 0.005,
            tol: 1e-12,
            ..Default::default()
        };
        let k_fine = solve_bound_states_with(&fine, &window).unwrap()[0].k_star;
        assert!(
            (k_coarse - k_fine).abs() < 1e-6,
            "k* moved from {k_coarse} to {k_fine}"
        );
    }

    #[test]
    fn equal_mass_reference_angles_in_blocks() {
        let sk = skeleton(1.0, 1.0, SectorId::PP, 30);
        assert!((sk.geometry().theta12 - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!((sk.geometry().theta23 - 2.0 * PI / 3.0).abs() < 1e-14);
    }
}
