//! The shape vector field V on (A₁, A₂, B₁, B₂), its first integral, and the
//! induced flow on the unit sphere.

mod chart;
mod monitors;
mod sphere;
mod symmetry;

pub use chart::{
    chart_to_sphere, modified_field, modified_field_with_beta, sphere_to_chart, ChartPoint, CHART_RADIUS, MIN_RADICAND,
};
pub use monitors::{monitors, MonitorVector};
pub(crate) use sphere::split;
pub use sphere::{from_sphere, radial_log_derivative, s_infinity, s_one, tangential_field, to_sphere, SphereState};
pub use symmetry::{apply_symmetry, apply_symmetry_to_path, Symmetry};

use crate::error::{Error, Result};
use crate::state::{DerivVector, ShapeState};

/// V(R) without the domain check. Callers guarantee A₂, B₁, B₂ ≠ 0.
#[inline]
pub(crate) fn field(r: [f64; 4]) -> [f64; 4] {
    let [a1, a2, b1, b2] = r;
    let (a1s, a2s, b1s, b2s) = (a1 * a1, a2 * a2, b1 * b1, b2 * b2);
    [
        0.5 * (a1s / a2s - a1s / b2s),
        0.5 * ((b2s - a2s + b1s) / (b1 * b2) - a1 / a2),
        (a2s + b2s - b1s) / (a2 * b2),
        0.5 * ((a2s - b2s + b1s) / (a2 * b1) + a1 / b2),
    ]
}

pub(crate) fn check_denominators(r: [f64; 4]) -> Result<()> {
    if r[1] == 0.0 {
        return Err(Error::ZeroDenominator("A2"));
    }
    if r[2] == 0.0 {
        return Err(Error::ZeroDenominator("B1"));
    }
    if r[3] == 0.0 {
        return Err(Error::ZeroDenominator("B2"));
    }
    Ok(())
}

/// dR/dt for the torsion-free shape system. A₁ only enters numerators, so
/// A₁ = 0 is allowed.
pub fn rhs(state: &ShapeState) -> Result<DerivVector> {
    let r = state.to_array();
    check_denominators(r)?;
    Ok(DerivVector::from_array(field(r)))
}

/// F = 2A₁A₂B₂ − B₁(B₂² − A₂²), constant along solutions.
pub fn first_integral(state: &ShapeState) -> f64 {
    let ShapeState { a1, a2, b1, b2 } = *state;
    2.0 * a1 * a2 * b2 - b1 * (b2 * b2 - a2 * a2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;

    #[test]
    fn unit_state() {
        let d = rhs(&ShapeState::new(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(d, DerivVector::new(0.0, 0.0, 1.0, 1.0));
    }

    #[test]
    fn zero_denominators_rejected() {
        assert_eq!(rhs(&ShapeState::new(1.0, 1.0, 0.0, 1.0)), Err(Error::ZeroDenominator("B1")));
        assert!(rhs(&ShapeState::new(0.0, 1.0, 1.0, 1.0)).is_ok());
    }

    #[test]
    fn homogeneous_of_degree_zero() {
        let s = ShapeState::new(0.37, 1.9, 0.83, 2.4);
        let a = rhs(&s).unwrap().to_array();
        let b = rhs(&s.scaled(2.0)).unwrap().to_array();
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0));
        }
    }

    #[test]
    fn integral_at_singular_orbit() {
        let mu: f64 = 0.5;
        let lam = sqrt((1.0 - mu * mu) / 2.0);
        let f = first_integral(&ShapeState::new(mu, lam, 0.0, lam));
        assert!((f - 2.0 * mu * lam * lam).abs() < 1e-15);
        assert!((f - mu * (1.0 - mu * mu)).abs() < 1e-15);
    }
}
