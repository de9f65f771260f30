//! Zeros of the tangential field on S³ and linearisations there.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::eigen::{eig_small, Eigen};
use crate::error::{Error, Result};
use crate::flow::{modified_field, sphere_to_chart, split, tangential_field, ChartPoint, SphereState, Symmetry};
use crate::linalg::Matrix;
use crate::math::{dot, norm};

/// Field norm below which a point counts as stationary.
pub const STATIONARY_TOL: f64 = 1e-8;
/// Central-difference step of the Jacobians.
pub const JACOBIAN_STEP: f64 = 1e-6;
/// Real parts within this of zero are classified as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linearization {
    /// The flow on S³ in an orthonormal basis of the tangent space.
    Tangential,
    /// The desingularised chart flow in (x, y, z), at a point of the arc J.
    ModifiedChart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryReport {
    pub point: SphereState,
    pub eigenvalues: Vec<Complex64>,
    /// Tangent 4-vectors, one per eigenvalue.
    pub eigenvectors: Vec<[Complex64; 4]>,
    /// Counts of eigenvalues with (negative, zero, positive) real part.
    pub classification: (usize, usize, usize),
    pub orbit_size: usize,
}

pub use crate::flow::{s_infinity, s_one};

/// Images of `s` under the group generated by the five symmetries.
pub fn symmetry_orbit(s: &SphereState) -> Vec<SphereState> {
    let gens = Symmetry::all();
    let mut orbit = alloc::vec![*s];
    let mut i = 0;
    while i < orbit.len() {
        let p = orbit[i];
        for g in &gens {
            let q = SphereState { alpha: g.map(p.alpha) };
            if !orbit.iter().any(|o| o.distance(&q) <= 1e-12) {
                orbit.push(q);
            }
        }
        i += 1;
    }
    orbit
}

/// The two stationary points in the closure of the working region, with
/// their orbit sizes; eigendata left empty.
pub fn stationary_points() -> Vec<StationaryReport> {
    [s_one(), s_infinity()]
        .into_iter()
        .map(|p| StationaryReport {
            point: p,
            eigenvalues: Vec::new(),
            eigenvectors: Vec::new(),
            classification: (0, 0, 0),
            orbit_size: symmetry_orbit(&p).len(),
        })
        .collect()
}

/// Orthonormal basis of the tangent space at `s` (Gram–Schmidt of the
/// coordinate axes, dropping the axis closest to `s`).
pub fn tangent_basis(s: &SphereState) -> [[f64; 4]; 3] {
    let a = s.alpha;
    let drop = (0..4).max_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs())).unwrap_or(0);
    let mut basis: Vec<[f64; 4]> = Vec::with_capacity(3);
    for k in (0..4).filter(|&k| k != drop) {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        let pa = dot(&v, &a);
        for i in 0..4 {
            v[i] -= pa * a[i];
        }
        for b in &basis {
            let pb = dot(&v, b);
            for i in 0..4 {
                v[i] -= pb * b[i];
            }
        }
        let n = norm(&v);
        basis.push(v.map(|c| c / n));
    }
    [basis[0], basis[1], basis[2]]
}

/// W on the cone over S³, extended with degree zero.
fn homogeneous_w(x: [f64; 4]) -> [f64; 4] {
    let n = norm(&x);
    split(x.map(|c| c / n)).0
}

pub fn linearize(s: &SphereState, system: Linearization) -> Result<Matrix> {
    let h = JACOBIAN_STEP;
    match system {
        Linearization::Tangential => {
            let w = tangential_field(s)?;
            if norm(&w) > STATIONARY_TOL {
                return Err(Error::NotStationary { norm: norm(&w) });
            }
            let basis = tangent_basis(s);
            let mut j = Matrix::zeros(3, 3);
            for (col, b) in basis.iter().enumerate() {
                let plus = homogeneous_w(core::array::from_fn(|i| s.alpha[i] + h * b[i]));
                let minus = homogeneous_w(core::array::from_fn(|i| s.alpha[i] - h * b[i]));
                let d: [f64; 4] = core::array::from_fn(|i| (plus[i] - minus[i]) / (2.0 * h));
                for (row, e) in basis.iter().enumerate() {
                    j[(row, col)] = dot(e, &d);
                }
            }
            Ok(j)
        }
        Linearization::ModifiedChart => {
            let p = sphere_to_chart(s);
            let f0 = modified_field(&p)?;
            if norm(&f0) > STATIONARY_TOL {
                return Err(Error::NotStationary { norm: norm(&f0) });
            }
            let mut j = Matrix::zeros(3, 3);
            for col in 0..3 {
                let mut pp = p.to_array();
                let mut pm = p.to_array();
                pp[col] += h;
                pm[col] -= h;
                let fp = modified_field(&ChartPoint::from_array(pp))?;
                let fm = modified_field(&ChartPoint::from_array(pm))?;
                for row in 0..3 {
                    j[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
                }
            }
            Ok(j)
        }
    }
}

fn classify(values: &[Complex64]) -> (usize, usize, usize) {
    values.iter().fold((0, 0, 0), |(n, z, p), v| {
        if v.re < -ZERO_EIGENVALUE_TOL {
            (n + 1, z, p)
        } else if v.re > ZERO_EIGENVALUE_TOL {
            (n, z, p + 1)
        } else {
            (n, z + 1, p)
        }
    })
}

/// Tangential eigendata of a stationary point.
pub fn stationary_report(s: &SphereState) -> Result<StationaryReport> {
    let j = linearize(s, Linearization::Tangential)?;
    let Eigen { values, vectors } = eig_small(&j)?;
    let basis = tangent_basis(s);
    let eigenvectors = vectors
        .iter()
        .map(|v| core::array::from_fn(|i| (0..3).map(|k| v[k] * basis[k][i]).sum::<Complex64>()))
        .collect();
    Ok(StationaryReport {
        point: *s,
        classification: classify(&values),
        eigenvalues: values,
        eigenvectors,
        orbit_size: symmetry_orbit(s).len(),
    })
}
