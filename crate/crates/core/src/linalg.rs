//! Small dense linear algebra: row-major matrices, Gaussian elimination,
//! Householder least squares and one-sided Jacobi singular values.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::math::{abs, sqrt};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[f64]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = *x;
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves the square system `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows;
    assert_eq!(a.cols, n, "solve needs a square matrix");
    assert_eq!(b.len(), n);
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.data.iter().fold(0.0_f64, |s, v| s.max(abs(*v)));
    if scale == 0.0 {
        return Err(Error::Singular);
    }
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| abs(m[(i, k)]).total_cmp(&abs(m[(j, k)]))).unwrap_or(k);
        if abs(m[(p, k)]) <= 1e-14 * scale {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                m.data.swap(p * n + j, k * n + j);
            }
            x.swap(p, k);
        }
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            if f != 0.0 {
                for j in k..n {
                    m[(i, j)] -= f * m[(k, j)];
                }
                x[i] -= f * x[k];
            }
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[(k, j)] * x[j]).sum();
        x[k] = (x[k] - s) / m[(k, k)];
    }
    Ok(x)
}

/// Least-squares solution of `a x ≈ b` (rows ≥ cols, full column rank) via
/// Householder QR. Returns the solution and the ∞-norm of `a x − b`.
pub fn lstsq(a: &Matrix, b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let (m, n) = (a.rows, a.cols);
    assert!(m >= n, "lstsq needs rows >= cols");
    assert_eq!(b.len(), m);
    let mut r = a.clone();
    let mut qtb = b.to_vec();
    let scale = r.data.iter().fold(0.0_f64, |s, v| s.max(abs(*v)));
    for k in 0..n {
        let alpha = sqrt((k..m).map(|i| r[(i, k)] * r[(i, k)]).sum());
        if alpha <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Singular);
        }
        let alpha = if r[(k, k)] > 0.0 { -alpha } else { alpha };
        let mut v: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..n {
            let s: f64 = (k..m).map(|i| v[i - k] * r[(i, j)]).sum::<f64>() * 2.0 / vnorm2;
            for i in k..m {
                r[(i, j)] -= s * v[i - k];
            }
        }
        let s: f64 = (k..m).map(|i| v[i - k] * qtb[i]).sum::<f64>() * 2.0 / vnorm2;
        for i in k..m {
            qtb[i] -= s * v[i - k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| r[(k, j)] * x[j]).sum();
        x[k] = (qtb[k] - s) / r[(k, k)];
    }
    let ax = a.mul_vec(&x);
    let residual = ax.iter().zip(b).fold(0.0_f64, |acc, (p, q)| acc.max(abs(p - q)));
    Ok((x, residual))
}

/// Singular values (descending) by one-sided Jacobi rotations on the columns.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let (m, n) = (a.rows, a.cols);
    let mut u = a.clone();
    for _sweep in 0..60 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    alpha += u[(i, p)] * u[(i, p)];
                    beta += u[(i, q)] * u[(i, q)];
                    gamma += u[(i, p)] * u[(i, q)];
                }
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(abs(gamma) / sqrt(alpha * beta));
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (abs(zeta) + sqrt(1.0 + zeta * zeta));
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                for i in 0..m {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| sqrt((0..m).map(|i| u[(i, j)] * u[(i, j)]).sum())).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Numerical rank: singular values above `rel_tol · σ_max`.
pub fn rank(a: &Matrix, rel_tol: f64) -> usize {
    let sv = singular_values(a);
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|s| **s > rel_tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let a = Matrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]]);
        let x = solve(&a, &[3.0, 5.0, 5.0]).unwrap();
        for (xi, ei) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((xi - ei).abs() < 1e-14);
        }
    }

    #[test]
    fn solve_rejects_singular() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(solve(&a, &[1.0, 2.0]), Err(Error::Singular));
    }

    #[test]
    fn lstsq_recovers_line() {
        let rows: Vec<[f64; 2]> = (0..10).map(|i| [1.0, i as f64]).collect();
        let a = Matrix::from_rows(&rows);
        let b: Vec<f64> = (0..10).map(|i| 2.0 + 0.5 * i as f64).collect();
        let (x, res) = lstsq(&a, &b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-13 && (x[1] - 0.5).abs() < 1e-13);
        assert!(res < 1e-13);
    }

    #[test]
    fn singular_values_of_diagonal_and_rank_deficient() {
        let a = Matrix::from_rows(&[[3.0, 0.0], [0.0, -4.0], [0.0, 0.0]]);
        let sv = singular_values(&a);
        assert!((sv[0] - 4.0).abs() < 1e-14 && (sv[1] - 3.0).abs() < 1e-14);
        let b = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]);
        assert_eq!(rank(&b, 1e-10), 1);
    }
}
