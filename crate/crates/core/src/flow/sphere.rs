//! R = f·S with |S| = 1: the tangential flow W and the radial rate β.

use super::{check_denominators, field};
use crate::error::{Error, Result};
use crate::math::{dot, norm, sqrt};
use crate::state::ShapeState;

/// A unit vector (α₁, α₂, α₃, α₄) in the (A₁, A₂, B₁, B₂) slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereState {
    pub alpha: [f64; 4],
}

impl SphereState {
    /// Stores the components as given; use [`SphereState::normalized`] to project.
    pub const fn new(a1: f64, a2: f64, a3: f64, a4: f64) -> Self {
        Self { alpha: [a1, a2, a3, a4] }
    }

    pub fn normalized(v: [f64; 4]) -> Result<Self> {
        let n = norm(&v);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { alpha: v.map(|x| x / n) })
    }

    pub fn as_shape(&self) -> ShapeState {
        ShapeState::from_array(self.alpha)
    }

    pub fn norm_defect(&self) -> f64 {
        (norm(&self.alpha) - 1.0).abs()
    }

    pub fn distance(&self, other: &SphereState) -> f64 {
        let d: [f64; 4] = core::array::from_fn(|i| self.alpha[i] - other.alpha[i]);
        norm(&d)
    }

    /// α₄ > α₂ > 0, α₁ > 0, α₃ > 0.
    pub fn in_open_pyramid(&self) -> bool {
        let [a1, a2, a3, a4] = self.alpha;
        a4 > a2 && a2 > 0.0 && a1 > 0.0 && a3 > 0.0
    }
}

/// S₁ = (1, 1, √3, √3) / (2√2).
pub fn s_one() -> SphereState {
    let c = 1.0 / (2.0 * sqrt(2.0));
    SphereState::new(c, c, sqrt(3.0) * c, sqrt(3.0) * c)
}

/// S∞ = (0, √(3/10), √(2/5), √(3/10)).
pub fn s_infinity() -> SphereState {
    SphereState::new(0.0, sqrt(0.3), sqrt(0.4), sqrt(0.3))
}

/// (S, f) with f = |R|.
pub fn to_sphere(state: &ShapeState) -> Result<(SphereState, f64)> {
    let r = state.to_array();
    let f = norm(&r);
    Ok((SphereState::normalized(r)?, f))
}

pub fn from_sphere(s: &SphereState, f: f64) -> Result<ShapeState> {
    if !(f > 0.0) {
        return Err(Error::InvalidParameter { name: "f", value: f });
    }
    Ok(ShapeState::from_array(s.alpha.map(|a| f * a)))
}

/// (W, β) without domain checks.
#[inline]
pub(crate) fn split(s: [f64; 4]) -> ([f64; 4], f64) {
    let v = field(s);
    let beta = dot(&v, &s);
    (core::array::from_fn(|i| v[i] - beta * s[i]), beta)
}

/// W(S) = V(S) − ⟨V(S), S⟩ S.
pub fn tangential_field(s: &SphereState) -> Result<[f64; 4]> {
    check_denominators(s.alpha)?;
    Ok(split(s.alpha).0)
}

/// β(S) = ⟨V(S), S⟩ = d ln f / du.
pub fn radial_log_derivative(s: &SphereState) -> Result<f64> {
    check_denominators(s.alpha)?;
    Ok(split(s.alpha).1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s_inf() -> SphereState {
        s_infinity()
    }

    #[test]
    fn unit_state_projection() {
        let (s, f) = to_sphere(&ShapeState::new(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(s.alpha, [0.5; 4]);
        assert_eq!(f, 2.0);
    }

    #[test]
    fn singular_orbit_is_on_the_sphere() {
        let mu: f64 = 0.3;
        let lam = sqrt((1.0 - mu * mu) / 2.0);
        let (s, f) = to_sphere(&ShapeState::new(mu, lam, 0.0, lam)).unwrap();
        assert!((f - 1.0).abs() < 1e-15);
        for (a, b) in s.alpha.iter().zip([mu, lam, 0.0, lam]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(to_sphere(&ShapeState::new(0.0, 0.0, 0.0, 0.0)), Err(Error::ZeroVector));
        assert!(from_sphere(&s_inf(), 0.0).is_err());
    }

    #[test]
    fn stationary_points_have_zero_tangential_field() {
        let c = 1.0 / (2.0 * sqrt(2.0));
        let s1 = SphereState::new(c, c, sqrt(3.0) * c, sqrt(3.0) * c);
        for s in [s1, s_inf()] {
            let w = tangential_field(&s).unwrap();
            assert!(norm(&w) <= 1e-12, "{w:?}");
        }
    }

    #[test]
    fn beta_at_s_infinity() {
        let b = radial_log_derivative(&s_inf()).unwrap();
        assert!((b - sqrt(10.0) / 3.0).abs() < 1e-14);
        // V is parallel to S at S∞, with V₃ = 2/3.
        let v = field(s_inf().alpha);
        assert!((v[2] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn beta_at_s1_matches_parallel_field() {
        let c = 1.0 / (2.0 * sqrt(2.0));
        let s1 = [c, c, sqrt(3.0) * c, sqrt(3.0) * c];
        let v = field(s1);
        let b = radial_log_derivative(&SphereState { alpha: s1 }).unwrap();
        for i in 0..4 {
            assert!((v[i] - b * s1[i]).abs() < 1e-13);
        }
        assert!((b - 0.942_809_041_582_063_4).abs() < 1e-12);
    }
}
