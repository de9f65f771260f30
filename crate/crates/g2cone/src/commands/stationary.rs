use g2cone_core::analysis::{eig_small, linearize, s_infinity, s_one, stationary_report, Linearization};
use g2cone_core::flow::{chart_to_sphere, ChartPoint, SphereState};
use serde::Serialize;

use super::{Cplx, SCHEMA};
use crate::config::RunConfig;

pub const S_ONE_TOL: f64 = 1e-6;
pub const CHART_EIGEN_TOL: f64 = 1e-7;
pub const DIRECTION_TOL: f64 = 1e-6;
pub const DEFAULT_MUS: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub name: &'static str,
    pub point: [f64; 4],
    pub orbit_size: usize,
    pub eigenvalues: Vec<Cplx>,
    /// Real parts of the unit tangent eigenvectors.
    pub eigenvectors: Vec<[f64; 4]>,
    /// Counts of eigenvalues with negative, zero and positive real part.
    pub classification: [usize; 3],
    pub expected_eigenvalues: Option<Vec<f64>>,
    pub max_eigenvalue_error: Option<f64>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartReport {
    pub mu: f64,
    pub jacobian: Vec<Vec<f64>>,
    pub eigenvalues: Vec<Cplx>,
    /// Unit eigenvector of the largest eigenvalue, x-component positive.
    pub unstable_direction: Option<[f64; 3]>,
    pub expected_eigenvalues: [f64; 3],
    pub max_eigenvalue_error: Option<f64>,
    pub expected_direction: [f64; 3],
    /// Angle between the computed and expected directions, in radians.
    pub direction_angle: Option<f64>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationaryCmdReport {
    pub schema: u32,
    pub command: &'static str,
    pub points: Vec<PointReport>,
    pub chart: Vec<ChartReport>,
    pub passed: bool,
}

pub fn s_one_expected() -> [f64; 3] {
    let (r2, r290) = (2.0_f64.sqrt(), 290.0_f64.sqrt());
    [-2.0 * r2, -7.0 * r2 / 3.0 - r290 / 3.0, -7.0 * r2 / 3.0 + r290 / 3.0]
}

pub fn chart_expected_direction(mu: f64) -> [f64; 3] {
    let d = [3.0, mu / (2.0 - 2.0 * mu * mu).sqrt(), 0.0];
    let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    d.map(|x| x / n)
}

/// Largest pairwise deviation after sorting; complex values count by modulus
/// of the difference.
fn set_error(computed: &[Cplx], expected: &[f64]) -> Option<f64> {
    if computed.len() != expected.len() {
        return None;
    }
    let mut c = computed.to_vec();
    c.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut e = expected.to_vec();
    e.sort_by(f64::total_cmp);
    Some(c.iter().zip(&e).fold(0.0_f64, |m, (a, b)| m.max((a.re - b).hypot(a.im))))
}

fn point_report(name: &'static str, s: &SphereState, expected: Option<Vec<f64>>) -> PointReport {
    let mut rep = PointReport {
        name,
        point: s.alpha,
        orbit_size: 0,
        eigenvalues: Vec::new(),
        eigenvectors: Vec::new(),
        classification: [0; 3],
        expected_eigenvalues: expected.clone(),
        max_eigenvalue_error: None,
        error: None,
        passed: false,
    };
    match stationary_report(s) {
        Ok(r) => {
            rep.orbit_size = r.orbit_size;
            rep.eigenvalues = r.eigenvalues.iter().map(|z| Cplx { re: z.re, im: z.im }).collect();
            rep.eigenvectors = r.eigenvectors.iter().map(|v| v.map(|z| z.re)).collect();
            rep.classification = [r.classification.0, r.classification.1, r.classification.2];
            rep.max_eigenvalue_error = expected.as_ref().and_then(|e| set_error(&rep.eigenvalues, e));
            rep.passed = match &expected {
                Some(_) => rep.max_eigenvalue_error.is_some_and(|e| e <= S_ONE_TOL),
                None => true,
            };
        }
        Err(e) => rep.error = Some(e.to_string()),
    }
    rep
}

fn chart_report(mu: f64) -> ChartReport {
    let expected_direction = chart_expected_direction(mu);
    let mut rep = ChartReport {
        mu,
        jacobian: Vec::new(),
        eigenvalues: Vec::new(),
        unstable_direction: None,
        expected_eigenvalues: [2.0, -1.0, 0.0],
        max_eigenvalue_error: None,
        expected_direction,
        direction_angle: None,
        error: None,
        passed: false,
    };
    let mut run = || -> g2cone_core::Result<()> {
        let s = chart_to_sphere(&ChartPoint::new(0.0, 0.0, mu))?;
        let j = linearize(&s, Linearization::ModifiedChart)?;
        rep.jacobian = (0..j.rows()).map(|i| j.row(i).to_vec()).collect();
        let eig = eig_small(&j)?;
        rep.eigenvalues = eig.values.iter().map(|z| Cplx { re: z.re, im: z.im }).collect();
        // Values are sorted by decreasing real part.
        if let (Some(v), Some(z)) = (eig.vectors.first(), eig.values.first()) {
            if z.im == 0.0 {
                let mut d = [v[0].re, v[1].re, v[2].re];
                let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                let sign = if d[0] < 0.0 { -1.0 } else { 1.0 };
                d = d.map(|x| sign * x / n);
                let cos: f64 = d.iter().zip(&expected_direction).map(|(a, b)| a * b).sum();
                rep.direction_angle = Some(cos.abs().min(1.0).acos());
                rep.unstable_direction = Some(d);
            }
        }
        Ok(())
    };
    if let Err(e) = run() {
        rep.error = Some(e.to_string());
    }
    rep.max_eigenvalue_error = set_error(&rep.eigenvalues, &rep.expected_eigenvalues);
    rep.passed = rep.max_eigenvalue_error.is_some_and(|e| e <= CHART_EIGEN_TOL)
        && rep.direction_angle.is_some_and(|a| a <= DIRECTION_TOL);
    rep
}

pub fn stationary(cfg: &RunConfig) -> StationaryCmdReport {
    let points = vec![
        point_report("S1", &s_one(), Some(s_one_expected().to_vec())),
        point_report("S_infinity", &s_infinity(), None),
    ];
    let chart: Vec<ChartReport> = cfg.mus_or(&DEFAULT_MUS).into_iter().map(chart_report).collect();
    let passed = points.iter().all(|p| p.passed) && chart.iter().all(|c| c.passed);
    StationaryCmdReport { schema: SCHEMA, command: "stationary", points, chart, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_error_ignores_order() {
        let c = [Cplx { re: 0.0, im: 0.0 }, Cplx { re: 2.0, im: 0.0 }, Cplx { re: -1.0, im: 0.0 }];
        assert_eq!(set_error(&c, &[2.0, -1.0, 0.0]), Some(0.0));
        assert_eq!(set_error(&c[..2], &[2.0, -1.0, 0.0]), None);
    }

    #[test]
    fn s_one_passes_and_chart_reports_derived_values() {
        let rep = stationary(&RunConfig { mus: vec![0.5], ..RunConfig::default() });
        let s1 = &rep.points[0];
        assert!(s1.passed, "{s1:?}");
        assert_eq!(s1.classification, [2, 0, 1]);
        let sinf = &rep.points[1];
        assert_eq!(sinf.classification, [3, 0, 0]);
        let c = &rep.chart[0];
        assert!(set_error(&c.eigenvalues, &[2.0, -2.0, 0.0]).unwrap() < 1e-7, "{c:?}");
        let lam = (0.375_f64).sqrt();
        let d = c.unstable_direction.unwrap();
        assert!((d[1] / d[0] - 0.5 / (2.0 * 2.0 * lam)).abs() < 1e-7);
        assert!(!rep.passed);
    }
}
