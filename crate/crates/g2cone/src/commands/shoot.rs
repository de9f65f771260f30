use std::path::PathBuf;

use g2cone_core::analysis::torsion_along;
use g2cone_core::flow::{first_integral, s_infinity};
use g2cone_core::shoot::{
    alc_fit, detect_convergence, family_shape, family_sphere, AlcFit, Sample, StepOptions, Termination, Trajectory,
};
use serde::Serialize;

use super::{write_file, write_json, SCHEMA};
use crate::config::RunConfig;
use crate::csv::write_trajectory;
use crate::svg::{Figure, Series};

/// Sample-to-sample slack for the monotone functionals.
pub const MONOTONE_SLACK: f64 = 1e-12;
/// Sphere level α₃ at which the non-homothety witness is read off.
pub const WITNESS_LEVEL: f64 = 0.3;

const LIMIT_NOTE: &str = "The function that stays bounded in the limit is A1, since the limit direction S_infinity \
has alpha1 = 0; B1 grows linearly with slope 2/3. The fit asserts A1 bounded, not B1.";

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn of(values: impl Iterator<Item = f64>) -> Option<Range> {
        values.fold(None, |r: Option<Range>, v| match r {
            None => Some(Range { min: v, max: v }),
            Some(r) => Some(Range { min: r.min.min(v), max: r.max.max(v) }),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonitorExtrema {
    #[serde(rename = "F")]
    pub f: Option<Range>,
    #[serde(rename = "F1")]
    pub f1: Option<Range>,
    #[serde(rename = "F2")]
    pub f2: Option<Range>,
    #[serde(rename = "F3")]
    pub f3: Option<Range>,
    #[serde(rename = "F4")]
    pub f4: Option<Range>,
    #[serde(rename = "F5")]
    pub f5: Option<Range>,
    #[serde(rename = "G1")]
    pub g1: Option<Range>,
    #[serde(rename = "G2")]
    pub g2: Option<Range>,
    pub f1_monotone: bool,
    pub f2_monotone: bool,
    pub g2_sign_changes: usize,
    /// G₂ starts positive and ends negative with one sign change.
    pub g2_single_crossing: bool,
    pub f5_positive_throughout: bool,
    pub f5_positive_while_g2_positive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeSummary {
    pub termination: &'static str,
    pub t_end: f64,
    pub steps: usize,
    pub samples: usize,
    pub error_estimate: f64,
    #[serde(rename = "F_initial")]
    pub f_initial: Option<f64>,
    #[serde(rename = "F_drift")]
    pub f_drift: f64,
    pub positive: bool,
    pub monitors: MonitorExtrema,
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereSummary {
    pub termination: &'static str,
    pub u_end: f64,
    pub t_end: f64,
    pub steps: usize,
    pub samples: usize,
    pub projection_drift: f64,
    pub converged: bool,
    pub u_converged: Option<f64>,
    pub t_converged: Option<f64>,
    pub distance_to_s_infinity: f64,
    /// Every sample up to convergence (or the end) in the open pyramid.
    pub in_pyramid: bool,
    /// F(S) = F/f³ where α₃ first reaches the witness level.
    pub witness_u: Option<f64>,
    #[serde(rename = "witness_F_sphere")]
    pub witness_f_sphere: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub slopes: [f64; 4],
    pub intercepts: [f64; 4],
    pub window: [f64; 2],
    pub max_deviation: f64,
    pub expected_slopes: [f64; 4],
    pub max_slope_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionSummary {
    pub every: usize,
    pub analytic: f64,
    pub differenced: f64,
    pub evaluated: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberReport {
    pub schema: u32,
    pub command: &'static str,
    pub mu: f64,
    pub lambda: f64,
    #[serde(rename = "F_expected")]
    pub f_expected: f64,
    pub t_max: f64,
    pub u_max: f64,
    pub tol: f64,
    pub conv_tol: f64,
    pub order: usize,
    pub shape: Option<ShapeSummary>,
    pub sphere: Option<SphereSummary>,
    pub alc_fit: Option<FitSummary>,
    pub torsion: Option<TorsionSummary>,
    pub errors: Vec<String>,
    pub positivity_ok: bool,
    pub converged: bool,
    pub notes: Vec<&'static str>,
    pub passed: bool,
}

pub fn expected_slopes() -> [f64; 4] {
    let r3 = 3.0_f64.sqrt();
    [0.0, 1.0 / r3, 2.0 / 3.0, 1.0 / r3]
}

pub fn member_dir(cfg: &RunConfig, mu: f64) -> PathBuf {
    cfg.out.join(format!("mu-{mu:.6}"))
}

pub fn step_options(cfg: &RunConfig) -> StepOptions {
    StepOptions { rtol: cfg.tol, atol: cfg.tol * 1e-2, ..StepOptions::default() }
}

fn monotone(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK)
}

fn monitor_extrema(inner: &[Sample]) -> MonitorExtrema {
    let col = |f: fn(&Sample) -> Option<f64>| -> Vec<f64> { inner.iter().filter_map(f).collect() };
    let (f1, f2, f5, g2) =
        (col(|s| s.monitors.f1), col(|s| s.monitors.f2), col(|s| s.monitors.f5), col(|s| s.monitors.g2));
    let g2_sign_changes = g2.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    let g2_single_crossing =
        g2_sign_changes == 1 && g2.first().is_some_and(|g| *g > 0.0) && g2.last().is_some_and(|g| *g < 0.0);
    let f5_positive_while_g2_positive =
        inner.iter().filter(|s| s.monitors.g2.is_some_and(|g| g > 0.0)).all(|s| s.monitors.f5.is_some_and(|f| f > 0.0));
    MonitorExtrema {
        f: Range::of(col(|s| s.monitors.f_integral).into_iter()),
        f1: Range::of(f1.iter().copied()),
        f2: Range::of(f2.iter().copied()),
        f3: Range::of(col(|s| s.monitors.f3).into_iter()),
        f4: Range::of(col(|s| s.monitors.f4).into_iter()),
        f5: Range::of(f5.iter().copied()),
        g1: Range::of(col(|s| s.monitors.g1).into_iter()),
        g2: Range::of(g2.iter().copied()),
        f1_monotone: f1.len() == inner.len() && monotone(&f1),
        f2_monotone: f2.len() == inner.len() && monotone(&f2),
        g2_sign_changes,
        g2_single_crossing,
        f5_positive_throughout: f5.len() == inner.len() && f5.iter().all(|f| *f > 0.0),
        f5_positive_while_g2_positive,
    }
}

fn shape_summary(traj: &Trajectory) -> ShapeSummary {
    // The first sample is the singular orbit itself (B₁ = 0).
    let inner = traj.samples.get(1..).unwrap_or(&[]);
    ShapeSummary {
        termination: traj.termination.as_str(),
        t_end: traj.last().map_or(0.0, |s| s.t),
        steps: traj.steps,
        samples: traj.samples.len(),
        error_estimate: traj.error_estimate,
        f_initial: inner.first().map(|s| first_integral(&s.shape)),
        f_drift: traj.integral_drift(),
        positive: traj.termination != Termination::PositivityViolation
            && inner.iter().all(|s| s.shape.is_strictly_positive()),
        monitors: monitor_extrema(inner),
    }
}

fn sphere_summary(traj: &Trajectory, conv_tol: f64) -> SphereSummary {
    let target = s_infinity();
    let (converged, u_converged) = detect_convergence(traj, &target, conv_tol);
    let t_converged = u_converged.and_then(|u| traj.samples.iter().find(|s| s.u == u)).map(|s| s.t);
    let last = traj.last();
    let in_pyramid = traj
        .samples
        .iter()
        .skip(1)
        .filter(|s| u_converged.map_or(true, |u| s.u <= u))
        .all(|s| s.sphere.in_open_pyramid());
    let witness = traj.sphere_at_level(2, WITNESS_LEVEL);
    SphereSummary {
        termination: traj.termination.as_str(),
        u_end: last.map_or(0.0, |s| s.u),
        t_end: last.map_or(0.0, |s| s.t),
        steps: traj.steps,
        samples: traj.samples.len(),
        projection_drift: traj.projection_drift,
        converged,
        u_converged,
        t_converged,
        distance_to_s_infinity: last.map_or(f64::NAN, |s| s.sphere.distance(&target)),
        in_pyramid,
        witness_u: witness.map(|w| w.0),
        witness_f_sphere: witness.map(|w| first_integral(&w.1.as_shape())),
    }
}

fn fit_summary(fit: &AlcFit) -> FitSummary {
    let expected = expected_slopes();
    FitSummary {
        slopes: fit.slopes,
        intercepts: fit.intercepts,
        window: [fit.window.0, fit.window.1],
        max_deviation: fit.max_deviation,
        expected_slopes: expected,
        max_slope_error: fit.slopes.iter().zip(&expected).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())),
    }
}

fn figures(shape: Option<&Trajectory>, sphere: Option<&Trajectory>, mu: f64) -> Vec<(&'static str, Figure)> {
    let mut out = Vec::new();
    if let Some(t) = shape {
        let names = ["A1", "A2", "B1", "B2"];
        let series = (0..4)
            .map(|i| Series {
                label: names[i].to_string(),
                points: t.samples.iter().map(|s| (s.t, s.shape.to_array()[i])).collect(),
            })
            .collect();
        out.push((
            "shape.svg",
            Figure {
                title: format!("Metric functions, mu = {mu}"),
                x_label: "t".into(),
                y_label: "value".into(),
                series,
            },
        ));
    }
    if let Some(t) = sphere {
        let proj = |label: &str, f: fn(&[f64; 4]) -> (f64, f64)| Figure {
            title: format!("Sphere projection, mu = {mu}"),
            x_label: label.into(),
            y_label: "alpha3".into(),
            series: vec![Series {
                label: format!("mu = {mu}"),
                points: t.samples.iter().map(|s| f(&s.sphere.alpha)).collect(),
            }],
        };
        out.push(("alpha1_alpha3.svg", proj("alpha1", |a| (a[0], a[2]))));
        out.push(("y_alpha3.svg", proj("alpha4 - alpha2", |a| (a[3] - a[1], a[2]))));
    }
    out
}

/// One family member: shape run to t_max, sphere run to u_max, fits and
/// checks; writes its files under [`member_dir`].
pub fn shoot_member(mu: f64, cfg: &RunConfig) -> anyhow::Result<MemberReport> {
    let opts = step_options(cfg);
    let lambda = ((1.0 - mu * mu) / 2.0).sqrt();
    let mut errors = Vec::new();
    let shape = family_shape(mu, cfg.order, cfg.t_max, &opts).map_err(|e| errors.push(format!("shape: {e}"))).ok();
    let sphere = family_sphere(mu, cfg.order, cfg.u_max, &opts).map_err(|e| errors.push(format!("sphere: {e}"))).ok();

    let shape_sum = shape.as_ref().map(shape_summary);
    let sphere_sum = sphere.as_ref().map(|t| sphere_summary(t, cfg.conv_tol));
    let alc = shape.as_ref().and_then(|t| match alc_fit(t, 0.5) {
        Ok(f) => Some(fit_summary(&f)),
        Err(e) => {
            errors.push(format!("fit: {e}"));
            None
        }
    });
    let torsion = shape.as_ref().and_then(|t| match torsion_along(t, cfg.stride) {
        Ok(r) => Some(TorsionSummary {
            every: cfg.stride,
            analytic: r.analytic,
            differenced: r.differenced,
            evaluated: r.evaluated,
        }),
        Err(e) => {
            errors.push(format!("torsion: {e}"));
            None
        }
    });

    let positivity_ok = shape_sum.as_ref().is_some_and(|s| s.positive)
        && sphere_sum.as_ref().is_some_and(|s| s.in_pyramid)
        && sphere.as_ref().is_some_and(|t| t.termination != Termination::PositivityViolation);
    let converged = sphere_sum.as_ref().is_some_and(|s| s.converged);
    let report = MemberReport {
        schema: SCHEMA,
        command: "shoot",
        mu,
        lambda,
        f_expected: mu * (1.0 - mu * mu),
        t_max: cfg.t_max,
        u_max: cfg.u_max,
        tol: cfg.tol,
        conv_tol: cfg.conv_tol,
        order: cfg.order,
        shape: shape_sum,
        sphere: sphere_sum,
        alc_fit: alc,
        torsion,
        passed: positivity_ok && converged && errors.is_empty(),
        errors,
        positivity_ok,
        converged,
        notes: vec![LIMIT_NOTE],
    };

    let dir = member_dir(cfg, mu);
    if cfg.formats.json {
        write_json(&dir.join("summary.json"), &report)?;
    }
    if cfg.formats.csv {
        for (name, traj) in [("trajectory.csv", &shape), ("sphere.csv", &sphere)] {
            if let Some(t) = traj {
                let mut buf = Vec::new();
                write_trajectory(&mut buf, &t.decimated(cfg.stride))?;
                write_file(&dir.join(name), &buf)?;
            }
        }
    }
    if cfg.formats.svg {
        let (sh, sp) = (shape.map(|t| t.decimated(cfg.stride)), sphere.map(|t| t.decimated(cfg.stride)));
        for (name, fig) in figures(sh.as_ref(), sp.as_ref(), mu) {
            // Plots are auxiliary; a failed write does not change the status.
            if let Err(e) = write_file(&dir.join(name), fig.render().as_bytes()) {
                eprintln!("warning: {e:#}");
            }
        }
    }
    Ok(report)
}
