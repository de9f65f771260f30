use g2cone_core::exterior::{wrong_sign_form, G2Structure};
use g2cone_core::flow::rhs;
use g2cone_core::ShapeState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::SCHEMA;
use crate::config::RunConfig;

pub const STATE_RANGE: (f64, f64) = (0.2, 5.0);
pub const DERIV_TOL: f64 = 1e-9;
pub const RESIDUAL_TOL: f64 = 1e-10;
const WORST_LISTED: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct TorsionCase {
    pub index: usize,
    pub state: [f64; 4],
    /// ‖solved − rhs‖∞ / max(1, ‖rhs‖∞); null when the solve failed.
    pub derivative_error: Option<f64>,
    /// max(‖dΨ‖∞, ‖d★Ψ‖∞) at derivatives rhs(s).
    pub residual: Option<f64>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyTorsionReport {
    pub schema: u32,
    pub command: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub state_range: [f64; 2],
    pub wrong_sign: bool,
    pub derivative_tol: f64,
    pub residual_tol: f64,
    pub max_derivative_error: Option<f64>,
    pub max_residual: Option<f64>,
    pub failures: usize,
    /// Failed cases first, then by largest scaled error.
    pub worst: Vec<TorsionCase>,
    pub passed: bool,
}

/// Seeded states, uniform in [0.2, 5]⁴.
pub fn random_states(seed: u64, n: usize) -> Vec<ShapeState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| ShapeState::from_array(std::array::from_fn(|_| rng.random_range(STATE_RANGE.0..=STATE_RANGE.1))))
        .collect()
}

fn check(g2: &G2Structure, index: usize, s: &ShapeState) -> TorsionCase {
    let mut case =
        TorsionCase { index, state: s.to_array(), derivative_error: None, residual: None, error: None, passed: false };
    let analytic = match rhs(s) {
        Ok(d) => d,
        Err(e) => {
            case.error = Some(e.to_string());
            return case;
        }
    };
    let a = analytic.to_array();
    let scale = a.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    match g2.solve_torsion_free_derivs(s) {
        Ok(d) => {
            let err = d.to_array().iter().zip(&a).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
            case.derivative_error = Some(err / scale);
        }
        Err(e) => case.error = Some(e.to_string()),
    }
    match g2.torsion_residual(s, &analytic) {
        Ok(r) => case.residual = Some(r.max()),
        Err(e) => case.error = case.error.take().or(Some(e.to_string())),
    }
    case.passed = case.error.is_none()
        && case.derivative_error.is_some_and(|e| e <= DERIV_TOL)
        && case.residual.is_some_and(|r| r <= RESIDUAL_TOL);
    case
}

fn severity(c: &TorsionCase) -> f64 {
    let d = c.derivative_error.map_or(f64::INFINITY, |e| e / DERIV_TOL);
    let r = c.residual.map_or(f64::INFINITY, |e| e / RESIDUAL_TOL);
    d.max(r)
}

pub fn verify_torsion(cfg: &RunConfig) -> VerifyTorsionReport {
    let g2 = if cfg.wrong_sign { G2Structure::from_form(wrong_sign_form()) } else { G2Structure::default() };
    let cases: Vec<TorsionCase> =
        random_states(cfg.seed, cfg.samples).iter().enumerate().map(|(i, s)| check(&g2, i, s)).collect();
    let fold_max = |f: fn(&TorsionCase) -> Option<f64>| {
        cases.iter().filter_map(f).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
    };
    let max_derivative_error = fold_max(|c| c.derivative_error);
    let max_residual = fold_max(|c| c.residual);
    let failures = cases.iter().filter(|c| !c.passed).count();
    let mut worst = cases;
    worst.sort_by(|a, b| a.passed.cmp(&b.passed).then(severity(b).total_cmp(&severity(a))).then(a.index.cmp(&b.index)));
    worst.truncate(WORST_LISTED);
    VerifyTorsionReport {
        schema: SCHEMA,
        command: "verify-torsion",
        seed: cfg.seed,
        samples: cfg.samples,
        state_range: [STATE_RANGE.0, STATE_RANGE.1],
        wrong_sign: cfg.wrong_sign,
        derivative_tol: DERIV_TOL,
        residual_tol: RESIDUAL_TOL,
        max_derivative_error,
        max_residual,
        failures,
        worst,
        passed: failures == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_are_seeded_and_in_range() {
        let a = random_states(7, 50);
        assert_eq!(a, random_states(7, 50));
        assert_ne!(a, random_states(8, 50));
        assert!(a.iter().flat_map(|s| s.to_array()).all(|x| (0.2..=5.0).contains(&x)));
    }

    #[test]
    fn small_run_passes_and_control_fails() {
        let cfg = RunConfig { samples: 10, ..RunConfig::default() };
        let rep = verify_torsion(&cfg);
        assert!(rep.passed && rep.failures == 0, "{rep:?}");
        assert!(rep.max_residual.unwrap() <= RESIDUAL_TOL);
        let bad = verify_torsion(&RunConfig { wrong_sign: true, ..cfg });
        assert!(!bad.passed);
        assert_eq!(bad.failures, 10);
        assert_eq!(bad.worst.len(), WORST_LISTED);
    }
}
