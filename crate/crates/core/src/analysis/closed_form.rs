//! Explicit solutions of the shape system in a radial variable r.
//!
//! ```text
//! Bgg:      A₁ = √((r−9/4)(r+9/4) / ((r−3/4)(r+3/4))),   A₂ = √((r+3/4)(r−9/4)/3),
//!           B₁ = 2r/3,   B₂ = √((r−3/4)(r+9/4)/3),          dt/dr = 1/A₁
//! Bs:       A₁ = A₂ = (r/3)√(1 − r⁻³),  B₁ = B₂ = r/√3,     dt/dr = 1/√(1 − r⁻³)
//! Singular: A₁ = A₂ = (r/3)√(1 + r⁻³),  B₁ = B₂ = r/√3,     dt/dr = 1/√(1 + r⁻³)
//! ```
//!
//! t is measured from the lower domain edge (r = 9/4, r = 1) and, for the
//! singular curve, from r = 1.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flow::{first_integral, rhs};
use crate::math::{abs, cosh, exp, sinh, sqrt};
use crate::state::ShapeState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    Bgg,
    Bs,
    Singular,
}

impl ClosedFormKind {
    pub const ALL: [ClosedFormKind; 3] = [ClosedFormKind::Bgg, ClosedFormKind::Bs, ClosedFormKind::Singular];

    pub fn name(&self) -> &'static str {
        match self {
            ClosedFormKind::Bgg => "bgg",
            ClosedFormKind::Bs => "bs",
            ClosedFormKind::Singular => "singular",
        }
    }

    /// Lower end of the r-domain.
    pub fn r_min(&self) -> f64 {
        match self {
            ClosedFormKind::Bgg => 2.25,
            ClosedFormKind::Bs => 1.0,
            ClosedFormKind::Singular => 0.0,
        }
    }

    /// r at which t = 0.
    pub fn t_origin(&self) -> f64 {
        match self {
            ClosedFormKind::Bgg => 2.25,
            ClosedFormKind::Bs | ClosedFormKind::Singular => 1.0,
        }
    }

    fn check(&self, r: f64, closed: bool) -> Result<()> {
        let lo = self.r_min();
        let ok = match (self, closed) {
            (ClosedFormKind::Bgg, true) => r >= lo,
            _ => r > lo,
        };
        if ok && r.is_finite() {
            Ok(())
        } else {
            Err(Error::OutOfDomain { r })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCurve {
    pub kind: ClosedFormKind,
    /// (r_min, r_max); r_max is infinite for every kind.
    pub domain: (f64, f64),
}

impl ClosedFormCurve {
    pub fn new(kind: ClosedFormKind) -> Self {
        Self { kind, domain: (kind.r_min(), f64::INFINITY) }
    }

    pub fn state(&self, r: f64) -> Result<ShapeState> {
        closed_form(self.kind, r)
    }

    pub fn lapse(&self, r: f64) -> Result<f64> {
        lapse(self.kind, r)
    }

    pub fn t(&self, r: f64) -> Result<f64> {
        r_to_t(self.kind, r)
    }
}

pub fn closed_form(kind: ClosedFormKind, r: f64) -> Result<ShapeState> {
    kind.check(r, true)?;
    Ok(match kind {
        ClosedFormKind::Bgg => {
            let (m, p) = (r - 2.25, r + 2.25);
            let (m3, p3) = (r - 0.75, r + 0.75);
            ShapeState::new(sqrt(m * p / (m3 * p3)), sqrt(p3 * m / 3.0), 2.0 * r / 3.0, sqrt(m3 * p / 3.0))
        }
        ClosedFormKind::Bs | ClosedFormKind::Singular => {
            let sign = if kind == ClosedFormKind::Bs { -1.0 } else { 1.0 };
            let a = r / 3.0 * sqrt(1.0 + sign / (r * r * r));
            let b = r / sqrt(3.0);
            ShapeState::new(a, a, b, b)
        }
    })
}

/// dt/dr.
pub fn lapse(kind: ClosedFormKind, r: f64) -> Result<f64> {
    kind.check(r, false)?;
    Ok(lapse_at_offset(kind, r, r - kind.r_min()))
}

/// dt/dr evaluated with s = r − r_min supplied separately, so that the
/// endpoint factor is free of cancellation.
fn lapse_at_offset(kind: ClosedFormKind, r: f64, s: f64) -> f64 {
    match kind {
        ClosedFormKind::Bgg => sqrt((r - 0.75) * (r + 0.75) / (s * (r + 2.25))),
        // r³ − 1 = (r − 1)(r² + r + 1)
        ClosedFormKind::Bs => sqrt(r * r * r / (s * (r * r + r + 1.0))),
        ClosedFormKind::Singular => sqrt(r * r * r / (r * r * r + 1.0)),
    }
}

/// Tanh-sinh quadrature of g(s) over s from 0 to `span` (either sign);
/// `g` may have an integrable singularity at s = 0.
fn tanh_sinh(g: impl Fn(f64) -> f64, span: f64, rel_tol: f64) -> f64 {
    const HALF_PI: f64 = core::f64::consts::FRAC_PI_2;
    const T_MAX: f64 = 4.0;
    let node = |tau: f64| -> Option<f64> {
        let q = HALF_PI * sinh(tau);
        let e = exp(-2.0 * q);
        let s = span / (1.0 + e);
        let w = span * HALF_PI * cosh(tau) / (2.0 * cosh(q) * cosh(q));
        // Nodes that round onto an endpoint carry negligible weight.
        if s == 0.0 || s == span || !w.is_finite() {
            return None;
        }
        Some(w * g(s))
    };
    let mut h = 0.5;
    let mut sum = node(0.0).unwrap_or(0.0);
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        let t = k as f64 * h;
        sum += node(t).unwrap_or(0.0) + node(-t).unwrap_or(0.0);
        k += 1;
    }
    let mut estimate = sum * h;
    for _level in 0..10 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            let t = k as f64 * h;
            sum += node(t).unwrap_or(0.0) + node(-t).unwrap_or(0.0);
            k += 2;
        }
        let next = sum * h;
        let done = abs(next - estimate) <= rel_tol * abs(next);
        estimate = next;
        if done {
            break;
        }
    }
    estimate
}

/// t(r) = ∫ dt/dr from the t-origin of the kind.
pub fn r_to_t(kind: ClosedFormKind, r: f64) -> Result<f64> {
    kind.check(r, true)?;
    let r0 = kind.t_origin();
    if r == r0 {
        return Ok(0.0);
    }
    Ok(tanh_sinh(|s| lapse_at_offset(kind, r0 + s, s), r - r0, 1e-13))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub kind: ClosedFormKind,
    pub samples: usize,
    /// Max over samples and components of |dR/dt − V(R)| / |V(R)|.
    pub max_mismatch: f64,
    /// Mean of F over the samples.
    pub integral_mean: f64,
    /// Max |F − mean|.
    pub integral_spread: f64,
}

/// Compares the r-derivative of the curve (central differences, step
/// 10⁻⁶·r), converted to t, against the shape field at each sample.
pub fn verify_solution(kind: ClosedFormKind, r_samples: &[f64]) -> Result<VerifyReport> {
    let mut max_mismatch = 0.0_f64;
    let mut integrals = Vec::with_capacity(r_samples.len());
    for &r in r_samples {
        let state = closed_form(kind, r)?;
        let h = 1e-6 * r;
        let (p, m) = (closed_form(kind, r + h)?.to_array(), closed_form(kind, r - h)?.to_array());
        let dt_dr = lapse(kind, r)?;
        let v = rhs(&state)?.to_array();
        let scale = v.iter().fold(0.0_f64, |a, x| a.max(abs(*x)));
        for i in 0..4 {
            let d = (p[i] - m[i]) / (2.0 * h) / dt_dr;
            let denom = abs(v[i]).max(1e-6 * scale);
            max_mismatch = max_mismatch.max(abs(d - v[i]) / denom);
        }
        integrals.push(first_integral(&state));
    }
    let n = integrals.len().max(1) as f64;
    let integral_mean = integrals.iter().sum::<f64>() / n;
    let integral_spread = integrals.iter().fold(0.0_f64, |a, f| a.max(abs(f - integral_mean)));
    Ok(VerifyReport { kind, samples: r_samples.len(), max_mismatch, integral_mean, integral_spread })
}

/// `n` points evenly spaced in [lo, hi].
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_values() {
        let b = closed_form(ClosedFormKind::Bgg, 2.25).unwrap();
        assert_eq!(b.a1, 0.0);
        assert_eq!(b.a2, 0.0);
        assert!((b.b1 - 1.5).abs() < 1e-15 && (b.b2 - 1.5).abs() < 1e-15);
        let b = closed_form(ClosedFormKind::Bgg, 3.0).unwrap();
        assert!((b.a1 - sqrt(7.0 / 15.0)).abs() < 1e-15);
        assert!((b.b1 - 2.0).abs() < 1e-15);
        let s = closed_form(ClosedFormKind::Bs, 2.0).unwrap();
        assert!((s.a1 - 2.0 / 3.0 * sqrt(7.0 / 8.0)).abs() < 1e-15);
        assert!((s.b1 - 2.0 / sqrt(3.0)).abs() < 1e-15);
        assert_eq!(s.a1, s.a2);
        assert_eq!(s.b1, s.b2);
    }

    #[test]
    fn domain() {
        assert!(closed_form(ClosedFormKind::Bgg, 2.0).is_err());
        assert!(closed_form(ClosedFormKind::Bs, 1.0).is_err());
        assert!(closed_form(ClosedFormKind::Singular, 0.0).is_err());
        assert!(r_to_t(ClosedFormKind::Bs, 0.5).is_err());
        assert!(lapse(ClosedFormKind::Bgg, 2.25).is_err());
    }

    #[test]
    fn formal_reflection_relates_bs_and_singular() {
        for r in [1.5_f64, 2.0, 7.0] {
            let bs = closed_form(ClosedFormKind::Bs, r).unwrap();
            let sg = closed_form(ClosedFormKind::Singular, r).unwrap();
            assert!((bs.a1 - r / 3.0 * sqrt(1.0 - 1.0 / (r * r * r))).abs() < 1e-15);
            assert!((sg.a1 - r / 3.0 * sqrt(1.0 + 1.0 / (r * r * r))).abs() < 1e-15);
            assert_eq!(bs.b1, sg.b1);
        }
    }

    #[test]
    fn t_origin_and_monotonicity() {
        assert_eq!(r_to_t(ClosedFormKind::Bgg, 2.25).unwrap(), 0.0);
        assert_eq!(r_to_t(ClosedFormKind::Singular, 1.0).unwrap(), 0.0);
        assert!(r_to_t(ClosedFormKind::Singular, 0.5).unwrap() < 0.0);
        for k in ClosedFormKind::ALL {
            assert!(r_to_t(k, 3.0).unwrap() < r_to_t(k, 4.0).unwrap());
        }
    }

    #[test]
    fn first_integrals() {
        for r in [2.3, 3.0, 10.0, 40.0] {
            let f = first_integral(&closed_form(ClosedFormKind::Bgg, r).unwrap());
            assert!((f + 27.0 / 8.0).abs() < 1e-12 * r * r, "{r}: {f}");
        }
        for r in [1.5, 3.0, 10.0, 40.0] {
            let f = first_integral(&closed_form(ClosedFormKind::Bs, r).unwrap());
            assert!((f + 1.0 / (3.0 * sqrt(3.0))).abs() < 1e-12 * r * r, "{r}: {f}");
        }
    }
}
