use rayon::prelude::*;
use serde::Serialize;

use super::shoot::{shoot_member, MemberReport};
use super::{write_file, write_json, SCHEMA};
use crate::config::{default_mu_grid, RunConfig};
use crate::csv::write_table;

pub const SWEEP_HEADER: [&str; 17] = [
    "mu",
    "converged",
    "u_converged",
    "t_converged",
    "F",
    "F_expected",
    "F_drift",
    "slope_A1",
    "slope_A2",
    "slope_B1",
    "slope_B2",
    "intercept_A1",
    "torsion_analytic",
    "torsion_differenced",
    "witness_u",
    "witness_F_sphere",
    "passed",
];

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub command: &'static str,
    pub mus: Vec<f64>,
    pub members: Vec<MemberReport>,
    pub failed_mus: Vec<f64>,
    pub passed: bool,
}

fn flag(b: bool) -> Option<f64> {
    Some(if b { 1.0 } else { 0.0 })
}

fn row(m: &MemberReport) -> Vec<Option<f64>> {
    let shape = m.shape.as_ref();
    let sphere = m.sphere.as_ref();
    let slope = |i: usize| m.alc_fit.as_ref().map(|f| f.slopes[i]);
    vec![
        Some(m.mu),
        flag(m.converged),
        sphere.and_then(|s| s.u_converged),
        sphere.and_then(|s| s.t_converged),
        shape.and_then(|s| s.f_initial),
        Some(m.f_expected),
        shape.map(|s| s.f_drift),
        slope(0),
        slope(1),
        slope(2),
        slope(3),
        m.alc_fit.as_ref().map(|f| f.intercepts[0]),
        m.torsion.as_ref().map(|t| t.analytic),
        m.torsion.as_ref().map(|t| t.differenced),
        sphere.and_then(|s| s.witness_u),
        sphere.and_then(|s| s.witness_f_sphere),
        flag(m.passed),
    ]
}

/// Members run concurrently, each writing under its own directory; the
/// aggregate files are written once all have finished.
pub fn sweep(cfg: &RunConfig) -> anyhow::Result<SweepReport> {
    let mus = cfg.mus_or(&default_mu_grid());
    let members = mus.par_iter().map(|&mu| shoot_member(mu, cfg)).collect::<anyhow::Result<Vec<_>>>()?;
    let failed_mus: Vec<f64> = members.iter().filter(|m| !m.passed).map(|m| m.mu).collect();
    let report =
        SweepReport { schema: SCHEMA, command: "sweep", mus, passed: failed_mus.is_empty(), failed_mus, members };
    if cfg.formats.csv {
        let rows: Vec<Vec<Option<f64>>> = report.members.iter().map(row).collect();
        let mut buf = Vec::new();
        write_table(&mut buf, &SWEEP_HEADER, &rows)?;
        write_file(&cfg.out.join("sweep.csv"), &buf)?;
    }
    if cfg.formats.json {
        write_json(&cfg.out.join("sweep.json"), &report)?;
    }
    Ok(report)
}
