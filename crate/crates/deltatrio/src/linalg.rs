//! Minimal dense linear algebra: a row-major matrix type and a symmetric
//! eigensolver (Householder tridiagonalization followed by implicit-shift QL).
//!
//! The solver targets dense symmetric matrices up to a few thousand rows,
//! which keeps every operator in this crate comfortably in the dense regime.

use crate::error::{Error, Result};
use rayon::prelude::*;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Mat {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in &rows {
            assert_eq!(r.len(), n_cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Mat {
            n_rows,
            n_cols,
            data,
        }
    }

    /// Build an `n x n` matrix from a function of the index pair.
    pub fn from_fn(n_rows: usize, n_cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_rows).map(|i| self[(i, j)]).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Max absolute entry; zero for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest relative asymmetry `|a_ij - a_ji| / max_abs`.
    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.n_rows, self.n_cols);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for i in 0..self.n_rows {
            for j in (i + 1)..self.n_cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst / scale
    }

    /// Matrix product; rows are computed in parallel.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.n_cols, other.n_rows, "dimension mismatch");
        let n = self.n_rows;
        let m = other.n_cols;
        let kdim = self.n_cols;
        let mut out = Mat::zeros(n, m);
        out.data
            .par_chunks_mut(m)
            .enumerate()
            .for_each(|(i, out_row)| {
                for k in 0..kdim {
                    let aik = self.data[i * kdim + k];
                    if aik == 0.0 {
                        continue;
                    }
                    let brow = &other.data[k * m..(k + 1) * m];
                    for (o, b) in out_row.iter_mut().zip(brow) {
                        *o += aik * b;
                    }
                }
            });
        out
    }

    /// `self * diag(d) * self^T` for symmetric `self`; used for Schur terms.
    pub fn sandwich_diag(&self, d: &[f64]) -> Mat {
        assert_eq!(self.n_rows, self.n_cols);
        assert_eq!(d.len(), self.n_rows);
        let n = self.n_rows;
        // B = self * diag(sqrt(d)) would need d >= 0; keep the general form.
        let mut out = Mat::zeros(n, n);
        out.data
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, out_row)| {
                let arow = &self.data[i * n..(i + 1) * n];
                for (j, o) in out_row.iter_mut().enumerate() {
                    let brow = &self.data[j * n..(j + 1) * n];
                    let mut acc = 0.0;
                    for r in 0..n {
                        acc += arow[r] * d[r] * brow[r];
                    }
                    *o = acc;
                }
            });
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n_cols, x.len());
        (0..self.n_rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale_in_place(&mut self, s: f64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn add_in_place(&mut self, other: &Mat) {
        assert_eq!(self.n_rows, other.n_rows);
        assert_eq!(self.n_cols, other.n_cols);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// Force exact symmetry by averaging with the transpose.
    pub fn symmetrize(&mut self) {
        assert_eq!(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            for j in (i + 1)..self.n_cols {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = avg;
                self[(j, i)] = avg;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n_cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n_cols + j]
    }
}

/// Eigendecomposition of a symmetric matrix: ascending eigenvalues, and the
/// orthonormal eigenvectors as matrix columns when requested.
pub fn eigen_sym(a: &Mat, want_vectors: bool, label: &str) -> Result<(Vec<f64>, Option<Mat>)> {
    assert_eq!(a.n_rows, a.n_cols, "eigen_sym needs a square matrix");
    let n = a.n_rows;
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| Mat::zeros(0, 0))));
    }
    let mut z = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, &mut d, &mut e, want_vectors);
    tql(&mut d, &mut e, want_vectors.then_some(&mut z)).map_err(|_| {
        Error::EigenDidNotConverge {
            label: label.to_string(),
            n,
        }
    })?;
    // Sort ascending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors.then(|| {
        let mut v = Mat::zeros(n, n);
        for (new_j, &old_j) in order.iter().enumerate() {
            for i in 0..n {
                v[(i, new_j)] = z[(i, old_j)];
            }
        }
        v
    });
    Ok((values, vectors))
}

/// Householder reduction to tridiagonal form. On exit `d` holds the diagonal
/// and `e[1..]` the subdiagonal; when `accumulate` is set, `a` is overwritten
/// with the accumulated orthogonal transformation.
fn tred2(a: &mut Mat, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let n = d.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    a[(i, k)] /= scale;
                    h += a[(i, k)] * a[(i, k)];
                }
                let f = a[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                let mut fsum = 0.0;
                for j in 0..=l {
                    if accumulate {
                        a[(j, i)] = a[(i, j)] / h;
                    }
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[(j, k)] * a[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g / h;
                    fsum += e[j] * a[(i, j)];
                }
                let hh = fsum / (h + h);
                for j in 0..=l {
                    let f = a[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[(j, k)] -= f * e[k] + g * a[(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    if accumulate {
        d[0] = 0.0;
    }
    e[0] = 0.0;
    for i in 0..n {
        if accumulate {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += a[(i, k)] * a[(k, j)];
                    }
                    for k in 0..i {
                        let aki = a[(k, i)];
                        a[(k, j)] -= g * aki;
                    }
                }
            }
            d[i] = a[(i, i)];
            a[(i, i)] = 1.0;
            for j in 0..i {
                a[(j, i)] = 0.0;
                a[(i, j)] = 0.0;
            }
        } else {
            d[i] = a[(i, i)];
        }
    }
}

/// Implicit-shift QL iteration on a tridiagonal matrix. `d` holds the
/// diagonal, `e[1..]` the subdiagonal on entry; `d` holds unsorted
/// eigenvalues on exit. When `z` is provided its columns are rotated into
/// the eigenvectors.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Mat>) -> std::result::Result<(), ()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    // Deflation floor: graded matrices (compact-operator discretizations)
    // have long tails of near-zero diagonals where the purely relative
    // test never fires.
    let scale = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    let floor = f64::EPSILON * scale;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd + floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(());
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zm) = z.as_deref_mut() {
                    for k in 0..n {
                        f = zm[(k, i + 1)];
                        zm[(k, i + 1)] = s * zm[(k, i)] + c * f;
                        zm[(k, i)] = c * zm[(k, i)] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Cyclic Jacobi eigensolver. Slower than [`eigen_sym`]; kept as an
/// independent route for cross-checking in tests.
pub fn eigen_sym_jacobi(a: &Mat, max_sweeps: usize) -> Result<Vec<f64>> {
    assert_eq!(a.n_rows, a.n_cols);
    let n = a.n_rows;
    let mut m = a.clone();
    for sweep in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if off.sqrt() <= 1e-15 * m.frobenius_norm().max(f64::MIN_POSITIVE) {
            let mut vals: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
            vals.sort_by(f64::total_cmp);
            return Ok(vals);
        }
        let _ = sweep;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + theta.hypot(1.0))
                } else {
                    1.0 / (theta - theta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::EigenDidNotConverge {
        label: "jacobi".to_string(),
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_symmetric(n: usize, seed: u64) -> Mat {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-1.0..1.0);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let m = Mat::from_rows(vec![
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ]);
        let (vals, _) = eigen_sym(&m, false, "diag").unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_exchange() {
        let m = Mat::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let (vals, _) = eigen_sym(&m, false, "exchange").unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn residuals_and_orthonormality_random() {
        for seed in 0..3u64 {
            let n = 40;
            let m = random_symmetric(n, seed);
            let scale = m.max_abs();
            let (vals, vecs) = eigen_sym(&m, true, "random").unwrap();
            let v = vecs.unwrap();
            for j in 0..n {
                let col = v.column(j);
                let mv = m.matvec(&col);
                let res: f64 = mv
                    .iter()
                    .zip(&col)
                    .map(|(a, b)| (a - vals[j] * b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-10 * scale, "residual {res:.3e} too large");
            }
            // Orthonormality of the eigenvector columns.
            for j in 0..n {
                for k in j..n {
                    let dot: f64 = v
                        .column(j)
                        .iter()
                        .zip(v.column(k))
                        .map(|(a, b)| a * b)
                        .sum();
                    let target = if j == k { 1.0 } else { 0.0 };
                    assert!((dot - target).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn agrees_with_jacobi_route() {
        let m = random_symmetric(30, 7);
        let (ql_vals, _) = eigen_sym(&m, false, "ql").unwrap();
        let jac_vals = eigen_sym_jacobi(&m, 50).unwrap();
        for (a, b) in ql_vals.iter().zip(&jac_vals) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn trace_is_preserved() {
        let m = random_symmetric(25, 11);
        let trace: f64 = (0..25).map(|i| m[(i, i)]).sum();
        let (vals, _) = eigen_sym(&m, false, "trace").unwrap();
        let sum: f64 = vals.iter().sum();
        assert!((trace - sum).abs() < 1e-12 * 25.0);
    }

    #[test]
    fn sandwich_diag_matches_explicit_product() {
        let m = random_symmetric(12, 3);
        let d: Vec<f64> = (0..12).map(|i| 0.3 + 0.1 * i as f64).collect();
        let fast = m.sandwich_diag(&d);
        let mut dm = Mat::zeros(12, 12);
        for i in 0..12 {
            dm[(i, i)] = d[i];
        }
        let slow = m.mul(&dm).mul(&m);
        for i in 0..12 {
            for j in 0..12 {
                assert!((fast[(i, j)] - slow[(i, j)]).abs() < 1e-12);
            }
        }
    }
}
