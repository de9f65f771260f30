//! Eigenpairs of small (n ≤ 4) real matrices.
//!
//! Eigenvalues are roots of the characteristic polynomial (Faddeev–LeVerrier
//! coefficients, simultaneous Aberth iteration). Nearly equal roots are
//! merged into one cluster whose mean is used for every member; eigenvectors
//! span the null space of M − λI found by complete-pivoting elimination.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::math::{abs, sqrt};

pub const MAX_DIM: usize = 4;
/// Relative eigenpair residual |Mv − λv| / ‖M‖ that must be met.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    /// Sorted by decreasing real part, then decreasing imaginary part.
    pub values: Vec<Complex64>,
    /// Unit 2-norm, largest component real and positive.
    pub vectors: Vec<Vec<Complex64>>,
}

/// Coefficients c₀…c_n (c_n = 1) of det(λI − M).
pub fn characteristic_polynomial(m: &Matrix) -> Vec<f64> {
    let n = m.rows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        // M_k = M·M_{k−1} + c_{n−k+1} I
        let mut next = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s: f64 = (0..n).map(|l| m[(i, l)] * mk[(l, j)]).sum();
                if i == j {
                    s += c[n - k + 1];
                }
                next[(i, j)] = s;
            }
        }
        mk = next;
        let tr: f64 = (0..n).map(|i| (0..n).map(|l| m[(i, l)] * mk[(l, i)]).sum::<f64>()).sum();
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for coef in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + coef;
    }
    (p, dp)
}

/// Roots of the monic polynomial with coefficients `c` (ascending).
pub fn polynomial_roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let bound = 1.0 + c[..n].iter().fold(0.0_f64, |m, v| m.max(abs(*v)));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound, 0.4 + core::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut worst = 0.0_f64;
        for i in 0..n {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 =
                (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-16 {
            break;
        }
    }
    z
}

/// A root of multiplicity m is a simple root of the (m − 1)-th derivative;
/// Newton on that derivative from the cluster mean.
fn refine_multiple_root(c: &[f64], start: Complex64, m: usize) -> Complex64 {
    let mut d = c.to_vec();
    for _ in 1..m {
        d = (1..d.len()).map(|k| k as f64 * d[k]).collect();
    }
    let mut z = start;
    for _ in 0..50 {
        let (p, dp) = horner(&d, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

fn complex_residual(m: &Matrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    let n = m.rows();
    let mut r = 0.0_f64;
    for i in 0..n {
        let mv: Complex64 = (0..n).map(|j| v[j] * m[(i, j)]).sum();
        r = r.max((mv - lambda * v[i]).norm());
    }
    r
}

/// Null space of a (complex) square matrix by complete pivoting: columns
/// whose pivot falls below `tol` become free variables.
fn null_space(mut a: Vec<Vec<Complex64>>, tol: f64) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while rank < n {
        let mut best = (rank, rank, 0.0_f64);
        for (i, row) in a.iter().enumerate().skip(rank) {
            for (j, v) in row.iter().enumerate().skip(rank) {
                if v.norm() > best.2 {
                    best = (i, j, v.norm());
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        a.swap(rank, best.0);
        for row in a.iter_mut() {
            row.swap(rank, best.1);
        }
        col_perm.swap(rank, best.1);
        let piv = a[rank][rank];
        for i in 0..n {
            if i != rank {
                let f = a[i][rank] / piv;
                if f.norm() != 0.0 {
                    for j in rank..n {
                        let sub = f * a[rank][j];
                        a[i][j] -= sub;
                    }
                }
            }
        }
        rank += 1;
    }
    (rank..n)
        .map(|free| {
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            x[col_perm[free]] = Complex64::new(1.0, 0.0);
            for r in 0..rank {
                x[col_perm[r]] = -a[r][free] / a[r][r];
            }
            x
        })
        .collect()
}

fn normalize(v: &mut [Complex64]) {
    let n = sqrt(v.iter().map(|z| z.norm_sqr()).sum());
    let big = v
        .iter()
        .copied()
        .fold(Complex64::new(0.0, 0.0), |b, z| if z.norm() > b.norm() * (1.0 + 1e-12) { z } else { b });
    let phase = if big.norm() > 0.0 { big.conj() / big.norm() } else { Complex64::new(1.0, 0.0) };
    for z in v.iter_mut() {
        *z = *z * phase / n;
    }
}

/// Eigenvalues and eigenvectors of a real n × n matrix, n ≤ 4.
pub fn eig_small(m: &Matrix) -> Result<Eigen> {
    let n = m.rows();
    if n != m.cols() || n == 0 || n > MAX_DIM {
        return Err(Error::InvalidParameter { name: "matrix dimension", value: n as f64 });
    }
    let scale = m.norm().max(1.0);
    let poly = characteristic_polynomial(m);
    let mut roots = polynomial_roots(&poly);
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));

    // Group roots lying within the cluster radius of each other.
    let cluster_tol = 1e-4 * scale;
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for r in roots {
        match clusters.iter_mut().find(|c| c.iter().any(|z| (*z - r).norm() <= cluster_tol)) {
            Some(c) => c.push(r),
            None => clusters.push(vec![r]),
        }
    }

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for c in clusters {
        let mult = c.len();
        let mut lambda: Complex64 = c.iter().sum::<Complex64>() / mult as f64;
        if mult > 1 {
            lambda = refine_multiple_root(&poly, lambda, mult);
        }
        if abs(lambda.im) <= 1e-14 * scale {
            lambda.im = 0.0;
        }
        let shifted: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Complex64::new(m[(i, j)], 0.0) - if i == j { lambda } else { Complex64::new(0.0, 0.0) })
                    .collect()
            })
            .collect();
        let basis = null_space(shifted, 1e-7 * scale);
        if basis.len() < mult {
            return Err(Error::Defective { residual: f64::NAN });
        }
        for mut v in basis.into_iter().take(mult) {
            normalize(&mut v);
            let res = complex_residual(m, lambda, &v);
            if res > RESIDUAL_TOL * scale {
                return Err(Error::Defective { residual: res });
            }
            values.push(lambda);
            vectors.push(v);
        }
    }
    Ok(Eigen { values, vectors })
}
