//! Independent 2-D finite-difference oracle.
//!
//! Discretizes `H = -½Δ + Σᵢ cᵢ·δ(line i)` on `[-W, W]²` with Dirichlet
//! boundary and a 5-point Laplacian. A delta line is lumped onto the cells
//! it crosses with weight `coupling·ℓ/h²`, `ℓ` the intersection length of
//! the line with the cell. The ground state comes from inverse iteration
//! with conjugate-gradient solves, bootstrapped by a short Lanczos run.
//!
//! The oracle is deliberately coarse: it guards the interpretation of the
//! skeleton reduction (signs, couplings, energy identification), not digits.

use crate::error::{Error, Result};
use crate::geometry::{derive_geometry, Geometry, ModelParams};
use crate::linalg::{self, Mat};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Configuration of the finite-difference oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOracleConfig {
    /// Half-width `W` of the computational box `[-W, W]²`.
    pub box_half_width: f64,
    /// Grid points per axis (odd keeps a node on each symmetry axis).
    pub mesh: usize,
    /// Width of the delta realization in cells; `1` is the sharp
    /// intersection-length lumping, larger values average parallel
    /// sub-lines across a strip of that many cells.
    pub delta_width_cells: usize,
    /// Relative stagnation tolerance on the Rayleigh quotient.
    pub eigensolver_tol: f64,
}

impl Default for GridOracleConfig {
    fn default() -> Self {
        GridOracleConfig {
            box_half_width: 30.0,
            mesh: 601,
            delta_width_cells: 1,
            eigensolver_tol: 1e-10,
        }
    }
}

impl GridOracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mesh < 100 {
            return Err(Error::invalid(format!(
                "oracle mesh must be at least 100, got {}",
                self.mesh
            )));
        }
        if !(self.box_half_width > 0.0 && self.box_half_width.is_finite()) {
            return Err(Error::invalid(format!(
                "oracle box half-width must be positive, got {}",
                self.box_half_width
            )));
        }
        if self.delta_width_cells == 0 {
            return Err(Error::invalid(
                "delta width must be at least 1 cell".to_string(),
            ));
        }
        if self.eigensolver_tol.is_nan() || self.eigensolver_tol <= 0.0 {
            return Err(Error::invalid(
                "eigensolver tolerance must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

/// Ground-state solution of the discretized Hamiltonian.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub energy: f64,
    /// Normalized eigenvector, row-major over (x index, y index).
    pub psi: Vec<f64>,
    pub mesh: usize,
    pub spacing: f64,
}

struct FdOperator {
    n: usize,
    inv_2h2: f64,
    potential: Vec<f64>,
}

impl FdOperator {
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n;
        let inv_2h2 = self.inv_2h2;
        out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let base = i * n;
            for j in 0..n {
                let idx = base + j;
                let mut acc = 4.0 * v[idx];
                if i > 0 {
                    acc -= v[idx - n];
                }
                if i + 1 < n {
                    acc -= v[idx + n];
                }
                if j > 0 {
                    acc -= v[idx - 1];
                }
                if j + 1 < n {
                    acc -= v[idx + 1];
                }
                row[j] = acc * inv_2h2 + self.potential[idx] * v[idx];
            }
        });
    }
}

/// Accumulate `coupling·ℓ/h²` for a line through `offset·A^⊥` with unit
/// direction `A`, where `ℓ` is the length of the line inside each cell.
fn rasterize_line(
    potential: &mut [f64],
    n: usize,
    w: f64,
    h: f64,
    dir: [f64; 2],
    perp_offset: f64,
    coupling: f64,
) {
    let (ax, ay) = (dir[0], dir[1]);
    let p0 = [-ay * perp_offset, ax * perp_offset];
    let coord = |idx: usize| -> f64 { -w + idx as f64 * h };
    let weight = coupling / (h * h);
    if ax.abs() < 1e-12 {
        // Vertical line x = p0[0]: full cell height in one column.
        let i = ((p0[0] + w) / h + 0.5).floor() as isize;
        if (0..n as isize).contains(&i) {
            let i = i as usize;
            if p0[0] >= coord(i) - 0.5 * h && p0[0] < coord(i) + 0.5 * h {
                for j in 0..n {
                    potential[i * n + j] += weight * h;
                }
            }
        }
        return;
    }
    if ay.abs() < 1e-12 {
        let j = ((p0[1] + w) / h + 0.5).floor() as isize;
        if (0..n as isize).contains(&j) {
            let j = j as usize;
            if p0[1] >= coord(j) - 0.5 * h && p0[1] < coord(j) + 0.5 * h {
                for i in 0..n {
                    potential[i * n + j] += weight * h;
                }
            }
        }
        return;
    }
    for i in 0..n {
        let x_lo = coord(i) - 0.5 * h;
        let x_hi = coord(i) + 0.5 * h;
        let (mut t0x, mut t1x) = ((x_lo - p0[0]) / ax, (x_hi - p0[0]) / ax);
        if t0x > t1x {
            std::mem::swap(&mut t0x, &mut t1x);
        }
        let (y_a, y_b) = (p0[1] + t0x * ay, p0[1] + t1x * ay);
        let (y_min, y_max) = (y_a.min(y_b), y_a.max(y_b));
        let j_lo = (((y_min + w) / h - 0.5).floor().max(0.0)) as usize;
        let j_hi = ((((y_max + w) / h + 0.5).ceil()) as usize).min(n.saturating_sub(1));
        for j in j_lo..=j_hi.min(n - 1) {
            let y_lo = coord(j) - 0.5 * h;
            let y_hi = coord(j) + 0.5 * h;
            let (mut t0y, mut t1y) = ((y_lo - p0[1]) / ay, (y_hi - p0[1]) / ay);
            if t0y > t1y {
                std::mem::swap(&mut t0y, &mut t1y);
            }
            let overlap = t1x.min(t1y) - t0x.max(t0y);
            if overlap > 0.0 {
                potential[i * n + j] += weight * overlap;
            }
        }
    }
}

fn build_potential(
    geometry: &Geometry,
    couplings: [f64; 3],
    config: &GridOracleConfig,
) -> Vec<f64> {
    let n = config.mesh;
    let w = config.box_half_width;
    let h = 2.0 * w / (n - 1) as f64;
    let mut potential = vec![0.0; n * n];
    for (line, &c) in geometry.unit_vectors.iter().zip(&couplings) {
        if c == 0.0 {
            continue;
        }
        let width = config.delta_width_cells;
        if width == 1 {
            rasterize_line(&mut potential, n, w, h, *line, 0.0, c);
        } else {
            let n_sub = 4 * width;
            for m in 0..n_sub {
                let offset = ((m as f64 + 0.5) / n_sub as f64 - 0.5) * width as f64 * h;
                rasterize_line(&mut potential, n, w, h, *line, offset, c / n_sub as f64);
            }
        }
    }
    potential
}

fn deterministic_unit_vector(len: usize) -> Vec<f64> {
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut v: Vec<f64> = (0..len)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect();
    normalize(&mut v);
    v
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Short Lanczos run (no reorthogonalization) to locate the spectral bottom
/// well enough to place the inverse-iteration shift.
fn lanczos_bottom(op: &FdOperator, steps: usize) -> f64 {
    let n2 = op.n * op.n;
    let mut v_prev = vec![0.0; n2];
    let mut v = deterministic_unit_vector(n2);
    let mut alphas = Vec::with_capacity(steps);
    let mut betas = Vec::with_capacity(steps);
    let mut beta = 0.0;
    let mut w = vec![0.0; n2];
    for _ in 0..steps {
        op.apply(&v, &mut w);
        if beta != 0.0 {
            for (wi, vp) in w.iter_mut().zip(&v_prev) {
                *wi -= beta * vp;
            }
        }
        let alpha = dot(&v, &w);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= alpha * vi;
        }
        alphas.push(alpha);
        beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if beta < 1e-12 {
            break;
        }
        betas.push(beta);
        v_prev.clone_from(&v);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / beta;
        }
    }
    let m = alphas.len();
    let mut t = Mat::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let (vals, _) = linalg::eigen_sym(&t, false, "lanczos tridiagonal").expect("tridiagonal eigen");
    vals[0]
}

enum CgOutcome {
    Converged,
    NotPositiveDefinite,
    MaxIterations,
}

/// Conjugate gradients for `(H - σ) x = b`; `x` carries the start vector.
fn cg_shifted(op: &FdOperator, sigma: f64, b: &[f64], x: &mut [f64], tol: f64) -> CgOutcome {
    let n2 = b.len();
    let mut ax = vec![0.0; n2];
    op.apply(x, &mut ax);
    let mut r: Vec<f64> = b
        .iter()
        .zip(&ax)
        .zip(x.iter())
        .map(|((bi, axi), xi)| bi - (axi - sigma * xi))
        .collect();
    let mut p = r.clone();
    let mut rs_old = dot(&r, &r);
    let b_norm = dot(b, b).sqrt().max(f64::MIN_POSITIVE);
    let mut ap = vec![0.0; n2];
    for _ in 0..20_000 {
        if rs_old.sqrt() <= tol * b_norm {
            return CgOutcome::Converged;
        }
        op.apply(&p, &mut ap);
        for (api, pi) in ap.iter_mut().zip(&p) {
            *api -= sigma * pi;
        }
        let p_ap = dot(&p, &ap);
        if p_ap <= 0.0 {
            return CgOutcome::NotPositiveDefinite;
        }
        let alpha = rs_old / p_ap;
        for ((xi, pi), (ri, api)) in x.iter_mut().zip(&p).zip(r.iter_mut().zip(&ap)) {
            *xi += alpha * pi;
            *ri -= alpha * api;
        }
        let rs_new = dot(&r, &r);
        let beta = rs_new / rs_old;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rs_old = rs_new;
    }
    CgOutcome::MaxIterations
}

/// Ground state of the discretized Hamiltonian with explicit line couplings.
pub fn grid_oracle_with_couplings(
    geometry: &Geometry,
    couplings: [f64; 3],
    config: &GridOracleConfig,
) -> Result<OracleSolution> {
    config.validate()?;
    let n = config.mesh;
    let h = 2.0 * config.box_half_width / (n - 1) as f64;
    let op = FdOperator {
        n,
        inv_2h2: 1.0 / (2.0 * h * h),
        potential: build_potential(geometry, couplings, config),
    };
    let bottom_estimate = lanczos_bottom(&op, 90);
    let mut sigma = bottom_estimate - 0.5;

    let n2 = n * n;
    let mut x = deterministic_unit_vector(n2);
    let mut hx = vec![0.0; n2];
    let mut rho_prev = f64::INFINITY;
    let mut stable = 0;
    let mut restarts = 0;
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > 500 {
            return Err(Error::OracleDidNotConverge(format!(
                "inverse iteration stalled after {iterations} steps (rho = {rho_prev:.9e})"
            )));
        }
        let b = x.clone();
        match cg_shifted(&op, sigma, &b, &mut x, 1e-8) {
            CgOutcome::Converged => {}
            CgOutcome::NotPositiveDefinite => {
                restarts += 1;
                if restarts > 5 {
                    return Err(Error::OracleDidNotConverge(
                        "shift repeatedly above the spectral bottom".to_string(),
                    ));
                }
                sigma -= 0.5;
                x = deterministic_unit_vector(n2);
                rho_prev = f64::INFINITY;
                stable = 0;
                continue;
            }
            CgOutcome::MaxIterations => {
                return Err(Error::OracleDidNotConverge(
                    "conjugate gradients exhausted its iteration budget".to_string(),
                ));
            }
        }
        normalize(&mut x);
        op.apply(&x, &mut hx);
        let rho = dot(&x, &hx);
        if (rho - rho_prev).abs() <= config.eigensolver_tol * rho.abs().max(1.0) {
            stable += 1;
            if stable >= 2 {
                return Ok(OracleSolution {
                    energy: rho,
                    psi: x,
                    mesh: n,
                    spacing: h,
                });
            }
        } else {
            stable = 0;
        }
        rho_prev = rho;
    }
}

/// Ground-state energy of the physical configuration: attractive lines
/// `A₁, A₂` with coupling `-1` and the repulsive line `A₃` with `+λ`.
pub fn grid_oracle_ground_state(params: &ModelParams, config: &GridOracleConfig) -> Result<f64> {
    let geometry = derive_geometry(params);
    let couplings = [-1.0, -1.0, geometry.lambda];
    Ok(grid_oracle_with_couplings(&geometry, couplings, config)?.energy)
}

/// Squared fraction of `psi` that is odd under reflection of the given axis
/// (`0` reflects x, `1` reflects y).
pub fn odd_reflection_fraction(solution: &OracleSolution, axis: usize) -> f64 {
    let n = solution.mesh;
    let psi = &solution.psi;
    let mut odd_sq = 0.0;
    let mut total_sq = 0.0;
    for i in 0..n {
        for j in 0..n {
            let r = match axis {
                0 => psi[(n - 1 - i) * n + j],
                _ => psi[i * n + (n - 1 - j)],
            };
            let o = 0.5 * (psi[i * n + j] - r);
            odd_sq += o * o;
            total_sq += psi[i * n + j] * psi[i * n + j];
        }
    }
    odd_sq / total_sq
}
