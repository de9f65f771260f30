//! Taylor start at the singular orbit t = 0.
//!
//! Smooth closure fixes B₁(0) = 0, B₁'(0) = 2, A₁(0) = μ, A₁'(0) = 0 and
//! A₂(0) = B₂(0) = λ with 2λ² + μ² = 1. The remaining coefficients follow
//! from the shape system multiplied through by its denominators:
//!
//! ```text
//! 2A₂²B₂² A₁'   = A₁²(B₂² − A₂²)
//! 2A₂B₁B₂ A₂'   = A₂(B₂² − A₂² + B₁²) − A₁B₁B₂
//!   A₂B₂  B₁'   = A₂² + B₂² − B₁²
//! 2A₂B₁B₂ B₂'   = B₂(A₂² − B₂² + B₁²) + A₁A₂B₁
//! ```
//!
//! At order k the coefficient c_k enters the A₁ and B₁ equations at t^{k−1}
//! and the A₂ and B₂ equations at t^k (the latter through the factor B₁ ~ 2t).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::math::{abs, powf, sqrt};
use crate::state::{DerivVector, ShapeState};

pub const DEFAULT_ORDER: usize = 4;
/// Target truncation error for the launch offset.
pub const TRUNCATION_TARGET: f64 = 1e-10;
/// Upper bound on the launch offset.
pub const DELTA_CEILING: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesStart {
    pub mu: f64,
    pub lambda: f64,
    pub order: usize,
    /// `coefficients[f][k]` multiplies t^k in function f ∈ (A₁, A₂, B₁, B₂).
    pub coefficients: [Vec<f64>; 4],
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut r = vec![0.0; n];
    for (i, x) in a.iter().enumerate() {
        if *x != 0.0 {
            for (j, y) in b.iter().enumerate().take(n - i) {
                r[i + j] += x * y;
            }
        }
    }
    r
}

fn lin(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let n = terms[0].1.len();
    let mut r = vec![0.0; n];
    for (c, p) in terms {
        for (ri, pi) in r.iter_mut().zip(p.iter()) {
            *ri += c * pi;
        }
    }
    r
}

fn deriv(a: &[f64]) -> Vec<f64> {
    let mut d: Vec<f64> = (1..a.len()).map(|k| k as f64 * a[k]).collect();
    d.push(0.0);
    d
}

/// Polynomial residuals of the four cleared equations, truncated to the
/// coefficient length.
fn residuals(c: &[Vec<f64>; 4]) -> [Vec<f64>; 4] {
    let [a1, a2, b1, b2] = c;
    let (a1s, a2s, b1s, b2s) = (mul(a1, a1), mul(a2, a2), mul(b1, b1), mul(b2, b2));
    let a2b1b2 = mul(&mul(a2, b1), b2);
    let r1 = lin(&[(2.0, &mul(&mul(&a2s, &b2s), &deriv(a1))), (-1.0, &mul(&a1s, &lin(&[(1.0, &b2s), (-1.0, &a2s)])))]);
    let r2 = lin(&[
        (2.0, &mul(&a2b1b2, &deriv(a2))),
        (-1.0, &mul(a2, &lin(&[(1.0, &b2s), (-1.0, &a2s), (1.0, &b1s)]))),
        (1.0, &mul(&mul(a1, b1), b2)),
    ]);
    let r3 = lin(&[(1.0, &mul(&mul(a2, b2), &deriv(b1))), (-1.0, &a2s), (-1.0, &b2s), (1.0, &b1s)]);
    let r4 = lin(&[
        (2.0, &mul(&a2b1b2, &deriv(b2))),
        (-1.0, &mul(b2, &lin(&[(1.0, &a2s), (-1.0, &b2s), (1.0, &b1s)]))),
        (-1.0, &mul(&mul(a1, a2), b1)),
    ]);
    [r1, r2, r3, r4]
}

/// The residual entries that determine c_k: (r₁[k−1], r₂[k], r₃[k−1], r₄[k]).
fn order_residual(c: &[Vec<f64>; 4], k: usize) -> [f64; 4] {
    let r = residuals(c);
    [r[0][k - 1], r[1][k], r[2][k - 1], r[3][k]]
}

/// Solves for the coefficients of t^k in the functions listed in `unknowns`,
/// using the equations with the same indices. Affine in those unknowns once
/// all higher coefficients are zero.
fn solve_order(c: &mut [Vec<f64>; 4], k: usize, unknowns: &[usize]) -> Result<()> {
    let eval = |c: &[Vec<f64>; 4], x: &[f64]| {
        let mut cc = c.clone();
        for (u, v) in unknowns.iter().zip(x) {
            cc[*u][k] = *v;
        }
        let r = order_residual(&cc, k);
        unknowns.iter().map(|u| r[*u]).collect::<Vec<f64>>()
    };
    let n = unknowns.len();
    let zero = vec![0.0; n];
    let r0 = eval(c, &zero);
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        let mut e = zero.clone();
        e[j] = 1.0;
        let rj = eval(c, &e);
        let col: Vec<f64> = rj.iter().zip(&r0).map(|(a, b)| a - b).collect();
        m.set_column(j, &col);
    }
    let rhs: Vec<f64> = r0.iter().map(|v| -v).collect();
    let x = linalg::solve(&m, &rhs)?;
    for (u, v) in unknowns.iter().zip(x) {
        c[*u][k] = v;
    }
    Ok(())
}

pub fn series_start(mu: f64, order: usize) -> Result<SeriesStart> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidParameter { name: "mu", value: mu });
    }
    if !(3..=8).contains(&order) {
        return Err(Error::InvalidParameter { name: "order", value: order as f64 });
    }
    let lambda = sqrt((1.0 - mu * mu) / 2.0);
    // Two spare slots keep the order-k products complete.
    let len = order + 2;
    let mut c: [Vec<f64>; 4] = core::array::from_fn(|_| vec![0.0; len]);
    c[0][0] = mu;
    c[1][0] = lambda;
    c[3][0] = lambda;
    c[2][1] = 2.0;
    // At k = 1 the A₁ and B₁ equations are satisfied by the seed; the A₂, B₂
    // coefficients enter the remaining two linearly.
    solve_order(&mut c, 1, &[1, 3])?;
    for k in 2..=order {
        solve_order(&mut c, k, &[0, 1, 2, 3])?;
    }
    for row in c.iter_mut() {
        row.truncate(order + 1);
    }
    Ok(SeriesStart { mu, lambda, order, coefficients: c })
}

impl SeriesStart {
    /// Largest t at which the last nonzero term of each function stays
    /// below the truncation target, capped at [`DELTA_CEILING`].
    pub fn delta_max(&self) -> f64 {
        let mut delta = DELTA_CEILING;
        for row in &self.coefficients {
            if let Some(k) = (1..row.len()).rev().find(|&k| row[k] != 0.0) {
                delta = delta.min(powf(TRUNCATION_TARGET / abs(row[k]), 1.0 / k as f64));
            }
        }
        delta
    }

    fn horner(row: &[f64], t: f64) -> f64 {
        row.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn state_at(&self, t: f64) -> ShapeState {
        ShapeState::from_array(core::array::from_fn(|i| Self::horner(&self.coefficients[i], t)))
    }

    pub fn derivative_at(&self, t: f64) -> DerivVector {
        DerivVector::from_array(core::array::from_fn(|i| Self::horner(&deriv(&self.coefficients[i]), t)))
    }
}

/// Truncated series at 0 ≤ t ≤ δ_max.
pub fn eval_series(s: &SeriesStart, t: f64) -> Result<ShapeState> {
    if !(t >= 0.0 && t <= s.delta_max() * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter { name: "t", value: t });
    }
    Ok(s.state_at(t))
}
