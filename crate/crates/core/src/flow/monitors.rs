//! Scalar functionals tracked along sphere trajectories. Entries whose
//! formula has a vanishing denominator (or a non-positive log argument)
//! are `None`.

use super::sphere::{split, SphereState};
use super::{check_denominators, first_integral};
use crate::math::{ln, powi};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MonitorVector {
    /// f³ · F(S); equals F(R) for R = f·S.
    pub f_integral: Option<f64>,
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub f3: Option<f64>,
    pub f4: Option<f64>,
    pub f5: Option<f64>,
    pub g1: Option<f64>,
    pub g2: Option<f64>,
    pub beta: Option<f64>,
}

impl MonitorVector {
    /// In CSV column order F, F1, F2, F3, F4, F5, G1, G2, beta.
    pub fn to_array(&self) -> [Option<f64>; 9] {
        [self.f_integral, self.f1, self.f2, self.f3, self.f4, self.f5, self.g1, self.g2, self.beta]
    }
}

fn ratio(n: f64, d: f64) -> Option<f64> {
    let q = n / d;
    (d != 0.0 && q.is_finite()).then_some(q)
}

fn log_of(x: Option<f64>) -> Option<f64> {
    x.filter(|v| *v > 0.0).map(ln)
}

pub fn monitors(s: &SphereState, f: f64) -> MonitorVector {
    let [a1, a2, a3, a4] = s.alpha;
    let fs = first_integral(&s.as_shape());
    let d24 = a4 * a4 - a2 * a2;
    MonitorVector {
        f_integral: Some(powi(f, 3) * fs),
        f1: ratio(a1 * a2 * a4, 2.0 * a4 * a2 * a1 - a3 * d24),
        f2: log_of(ratio(a3 * d24, a4 * a2 * a1)),
        f3: log_of(ratio(a2, a4)),
        f4: ratio(a3, a4),
        f5: Some(a4 * a4 - a3 * a3),
        g1: Some(a2 * a4 - a1 * a3),
        g2: Some(a1 * a4 - a2 * a3),
        beta: check_denominators(s.alpha).ok().map(|_| split(s.alpha).1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;

    #[test]
    fn at_singular_orbit() {
        let mu: f64 = 0.4;
        let lam = sqrt((1.0 - mu * mu) / 2.0);
        let m = monitors(&SphereState::new(mu, lam, 0.0, lam), 1.0);
        assert!((m.g1.unwrap() - lam * lam).abs() < 1e-15);
        assert!((m.g2.unwrap() - mu * lam).abs() < 1e-15);
        assert!((m.f5.unwrap() - lam * lam).abs() < 1e-15);
        assert!((m.f_integral.unwrap() - mu * (1.0 - mu * mu)).abs() < 1e-15);
        // α₃ = 0 and α₂ = α₄: F₂ has a zero log argument, β a zero denominator.
        assert_eq!(m.f2, None);
        assert_eq!(m.beta, None);
    }

    #[test]
    fn at_stationary_points() {
        let c = 1.0 / (2.0 * sqrt(2.0));
        let m = monitors(&SphereState::new(c, c, sqrt(3.0) * c, sqrt(3.0) * c), 1.0);
        assert!(m.g1.unwrap().abs() < 1e-15 && m.g2.unwrap().abs() < 1e-15);
        assert!(m.f5.unwrap().abs() < 1e-15);
        let m = monitors(&SphereState::new(0.0, sqrt(0.3), sqrt(0.4), sqrt(0.3)), 1.0);
        assert!((m.f4.unwrap() - 2.0 / sqrt(3.0)).abs() < 1e-15);
        assert_eq!(m.f2, None);
        assert_eq!(m.f3, Some(0.0));
    }
}
