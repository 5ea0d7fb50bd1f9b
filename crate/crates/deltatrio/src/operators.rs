//! Nyström discretization of half-line integral operators.
//!
//! An operator with kernel `K` becomes the dense symmetric matrix
//! `M_ij = √(w_i w_j) K(p_i, p_j)` on a [`HalfLineGrid`]; a multiplication
//! operator stays diagonal in this weighted representation. Spectra are then
//! ordinary symmetric eigenproblems.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::quadrature::{adaptive_integrate, HalfLineGrid};
use rayon::prelude::*;
use std::sync::Arc;

/// A dense symmetric matrix representing an integral operator on `L²(ℝ₊)`,
/// together with the grid that produced it.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    matrix: Mat,
    grid: Arc<HalfLineGrid>,
    label: String,
}

impl DiscretizedOperator {
    /// Wrap an already-assembled symmetric matrix.
    pub fn from_parts(
        matrix: Mat,
        grid: Arc<HalfLineGrid>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        if matrix.n_rows() != grid.len() || matrix.n_cols() != grid.len() {
            return Err(Error::invalid(format!(
                "matrix dimensions {}x{} do not match grid of {} nodes for {label}",
                matrix.n_rows(),
                matrix.n_cols(),
                grid.len()
            )));
        }
        if matrix.asymmetry() > 1e-14 {
            return Err(Error::invalid(format!(
                "matrix for {label} is not symmetric (relative asymmetry {:.3e})",
                matrix.asymmetry()
            )));
        }
        Ok(DiscretizedOperator {
            matrix,
            grid,
            label,
        })
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat {
        self.matrix
    }

    pub fn grid(&self) -> &Arc<HalfLineGrid> {
        &self.grid
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n(&self) -> usize {
        self.grid.len()
    }
}

/// Eigenvalues in ascending order, with orthonormal eigenvectors as matrix
/// columns when requested.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Mat>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        *self.eigenvalues.first().expect("non-empty spectrum")
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

/// Assemble `M_ij = √(w_i w_j)·kernel(p_i, p_j)` for a symmetric kernel.
/// Rows are filled in parallel; any non-finite kernel value aborts with the
/// offending node pair.
pub fn assemble(
    kernel: impl Fn(f64, f64) -> f64 + Sync,
    grid: &Arc<HalfLineGrid>,
    label: impl Into<String>,
) -> Result<DiscretizedOperator> {
    let label = label.into();
    let n = grid.len();
    let nodes = grid.nodes();
    let weights = grid.weights();
    let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; n];
            for j in i..n {
                row[j] = sqrt_w[i] * sqrt_w[j] * kernel(nodes[i], nodes[j]);
            }
            row
        })
        .collect_into_vec(&mut rows);
    let mut m = Mat::from_rows(rows);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = m[(i, j)];
            if !v.is_finite() {
                return Err(Error::NonFiniteKernel {
                    label,
                    p: nodes[i],
                    q: nodes[j],
                });
            }
            m[(j, i)] = v;
        }
        if !m[(i, i)].is_finite() {
            return Err(Error::NonFiniteKernel {
                label,
                p: nodes[i],
                q: nodes[i],
            });
        }
    }
    Ok(DiscretizedOperator {
        matrix: m,
        grid: Arc::clone(grid),
        label,
    })
}

/// Assemble a multiplication operator `diag(symbol(p_i))`; quadrature
/// weights do not enter.
pub fn assemble_diagonal(
    symbol: impl Fn(f64) -> f64,
    grid: &Arc<HalfLineGrid>,
    label: impl Into<String>,
) -> Result<DiscretizedOperator> {
    let label = label.into();
    let n = grid.len();
    let mut m = Mat::zeros(n, n);
    for (i, &p) in grid.nodes().iter().enumerate() {
        let v = symbol(p);
        if !v.is_finite() {
            return Err(Error::NonFiniteKernel { label, p, q: p });
        }
        m[(i, i)] = v;
    }
    Ok(DiscretizedOperator {
        matrix: m,
        grid: Arc::clone(grid),
        label,
    })
}

/// Full symmetric eigendecomposition of a discretized operator.
pub fn eigen_symmetric(op: &DiscretizedOperator, want_vectors: bool) -> Result<Spectrum> {
    let (eigenvalues, eigenvectors) = linalg::eigen_sym(op.matrix(), want_vectors, op.label())?;
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Hilbert–Schmidt norm `√(∬ kernel(p,q)² dp dq)` by nested adaptive
/// quadrature, to relative accuracy `tol`.
pub fn hs_norm(kernel: impl Fn(f64, f64) -> f64 + Copy, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
        return Err(Error::invalid(format!(
            "hs_norm tolerance must lie in (0, 1), got {tol}"
        )));
    }
    // Rough magnitude from a coarse fixed grid, to set absolute tolerances.
    let coarse = crate::quadrature::build_grid(&crate::quadrature::QuadratureConfig::with_n(64))?;
    let mut rough = 0.0;
    for (&p, &wp) in coarse.nodes().iter().zip(coarse.weights()) {
        for (&q, &wq) in coarse.nodes().iter().zip(coarse.weights()) {
            rough += wp * wq * kernel(p, q) * kernel(p, q);
        }
    }
    if !rough.is_finite() {
        return Err(Error::DivergentIntegral(
            "squared kernel not integrable on the coarse grid".to_string(),
        ));
    }
    if rough == 0.0 {
        return Ok(0.0);
    }
    let outer_tol = (tol * rough).max(1e-15);
    let inner_tol = (outer_tol * 0.02).max(1e-16);
    let value_sq = adaptive_integrate(
        |p| {
            adaptive_integrate(|q| kernel(p, q) * kernel(p, q), inner_tol)
                .map(|(v, _)| v)
                .unwrap_or(f64::NAN)
        },
        outer_tol,
    )
    .map_err(|e| match e {
        Error::IntegrationDidNotConverge {
            best, err_estimate, ..
        } => Error::IntegrationDidNotConverge {
            context: "Hilbert-Schmidt double integral".to_string(),
            best: best.max(0.0).sqrt(),
            err_estimate,
        },
        other => other,
    })?
    .0;
    if !value_sq.is_finite() || value_sq < 0.0 {
        return Err(Error::DivergentIntegral(
            "Hilbert-Schmidt double integral did not stabilize".to_string(),
        ));
    }
    Ok(value_sq.sqrt())
}
