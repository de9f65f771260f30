//! Chart (x, y, z) = (α₃, α₄ − α₂, α₁) around the singular arc
//! J = {x = y = 0}, and the field x·W that extends smoothly across J.
//!
//! W has a simple pole on α₃ = 0 (through V₂ and V₄). The product x·W is
//! evaluated with the factor x cancelled by hand so that it is finite and
//! smooth at x = 0.

use super::sphere::SphereState;
use crate::error::{Error, Result};
use crate::math::sqrt;

/// Largest √(x² + y²) at which the modified system is used.
pub const CHART_RADIUS: f64 = 0.35;
/// Smallest radicand 2 − 2x² − y² − 2z² accepted by the modified system.
pub const MIN_RADICAND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ChartPoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn radicand(&self) -> f64 {
        2.0 - 2.0 * self.x * self.x - self.y * self.y - 2.0 * self.z * self.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(p: [f64; 3]) -> Self {
        Self::new(p[0], p[1], p[2])
    }
}

pub fn chart_to_sphere(p: &ChartPoint) -> Result<SphereState> {
    let radicand = p.radicand();
    if !(radicand >= 0.0) {
        return Err(Error::InvalidChart { radicand });
    }
    let r = sqrt(radicand);
    Ok(SphereState::new(p.z, 0.5 * (r - p.y), p.x, 0.5 * (r + p.y)))
}

pub fn sphere_to_chart(s: &SphereState) -> ChartPoint {
    let [a1, a2, a3, a4] = s.alpha;
    ChartPoint::new(a3, a4 - a2, a1)
}

/// (x·W in chart coordinates, x·β).
pub fn modified_field_with_beta(p: &ChartPoint) -> Result<([f64; 3], f64)> {
    let radicand = p.radicand();
    if !(radicand >= MIN_RADICAND) {
        return Err(Error::InvalidChart { radicand });
    }
    let [a1, a2, x, a4] = chart_to_sphere(p)?.alpha;
    let (a1s, a2s, xs, a4s) = (a1 * a1, a2 * a2, x * x, a4 * a4);
    let xv = [
        x * 0.5 * a1s * (1.0 / a2s - 1.0 / a4s),
        0.5 * ((a4s - a2s + xs) / a4 - x * a1 / a2),
        x * (a2s + a4s - xs) / (a2 * a4),
        0.5 * ((a2s - a4s + xs) / a2 + x * a1 / a4),
    ];
    let alpha = [a1, a2, x, a4];
    let xbeta: f64 = (0..4).map(|i| xv[i] * alpha[i]).sum();
    let xw: [f64; 4] = core::array::from_fn(|i| xv[i] - xbeta * alpha[i]);
    Ok(([xw[2], xw[3] - xw[1], xw[0]], xbeta))
}

/// d(x, y, z)/dv for the desingularised system, dv = du / x.
pub fn modified_field(p: &ChartPoint) -> Result<[f64; 3]> {
    modified_field_with_beta(p).map(|(f, _)| f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::tangential_field;

    #[test]
    fn chart_centre_is_singular_orbit() {
        let mu: f64 = 0.5;
        let lam = sqrt((1.0 - mu * mu) / 2.0);
        let s = chart_to_sphere(&ChartPoint::new(0.0, 0.0, mu)).unwrap();
        let expect = [mu, lam, 0.0, lam];
        for i in 0..4 {
            assert!((s.alpha[i] - expect[i]).abs() < 1e-15);
        }
        let c = chart_to_sphere(&ChartPoint::new(0.0, 0.0, 0.0)).unwrap();
        let h = 1.0 / sqrt(2.0);
        assert!((c.alpha[1] - h).abs() < 1e-15 && (c.alpha[3] - h).abs() < 1e-15);
    }

    #[test]
    fn negative_radicand_rejected() {
        assert!(matches!(chart_to_sphere(&ChartPoint::new(1.0, 0.0, 0.5)), Err(Error::InvalidChart { .. })));
        assert!(modified_field(&ChartPoint::new(0.0, 0.0, 0.99)).is_err());
    }

    #[test]
    fn field_vanishes_on_the_arc() {
        for mu in [0.05, 0.25, 0.5, 0.75, 0.95] {
            let f = modified_field(&ChartPoint::new(0.0, 0.0, mu)).unwrap();
            assert!(f.iter().all(|c| c.abs() < 1e-15), "{f:?}");
        }
        assert!(modified_field(&ChartPoint::new(0.0, 0.1, 0.5)).unwrap()[1].abs() > 0.1);
    }

    #[test]
    fn agrees_with_x_times_tangential_field_off_the_arc() {
        let p = ChartPoint::new(0.2, 0.07, 0.4);
        let s = chart_to_sphere(&p).unwrap();
        let w = tangential_field(&s).unwrap();
        let m = modified_field(&p).unwrap();
        let expect = [p.x * w[2], p.x * (w[3] - w[1]), p.x * w[0]];
        for i in 0..3 {
            assert!((m[i] - expect[i]).abs() < 1e-14);
        }
    }
}
