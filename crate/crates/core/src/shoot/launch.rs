//! Producing trajectories of the shape system, the sphere flow and the
//! desingularised chart flow.

use alloc::vec::Vec;

use super::integrator::{integrate, Control, StepOptions, Stop};
use super::series::{eval_series, series_start, SeriesStart};
use super::trajectory::{ParamKind, Sample, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::flow::{
    chart_to_sphere, field, modified_field_with_beta, split, to_sphere, ChartPoint, SphereState, MIN_RADICAND,
};
use crate::math::{exp, ln, norm, sqrt};
use crate::state::ShapeState;

/// Interior samples must keep every shape component above this.
pub const POSITIVITY_FLOOR: f64 = 1e-9;
/// Chart coordinate x at which the chart phase hands over to the sphere flow.
pub const CHART_SWITCH: f64 = 0.01;
/// Largest launch offset from the singular arc.
pub const MAX_LAUNCH_EPS: f64 = 1e-4;
/// Bound on the chart-flow parameter; x grows like e^{2v}, so the switch
/// is reached long before.
const CHART_V_LIMIT: f64 = 1e3;

fn halted(stop: Stop<Termination>) -> Termination {
    match stop {
        Stop::Horizon => Termination::ReachedHorizon,
        Stop::StepFailure => Termination::StepFailure,
        Stop::Requested(t) => t,
    }
}

fn shape_field(y: &[f64; 5]) -> Option<[f64; 5]> {
    let r = [y[0], y[1], y[2], y[3]];
    if r[1] == 0.0 || r[2] == 0.0 || r[3] == 0.0 {
        return None;
    }
    let v = field(r);
    Some([v[0], v[1], v[2], v[3], 1.0 / norm(&r)])
}

/// Shape system from `start` at t0 with u(t0) = u0; pushes output samples.
fn run_shape(
    start: ShapeState,
    t0: f64,
    u0: f64,
    t1: f64,
    opts: &StepOptions,
    samples: &mut Vec<Sample>,
) -> Result<(Termination, f64, usize)> {
    let start = start.require_positive()?;
    if !(t1 > t0) {
        return Err(Error::InvalidParameter { name: "t1", value: t1 });
    }
    let y0 = [start.a1, start.a2, start.b1, start.b2, u0];
    let mut failed = None;
    let out = integrate(
        |_, y| shape_field(y),
        t0,
        y0,
        t1,
        opts,
        |_| 0.0,
        |t, y, output| {
            if y[..4].iter().any(|c| *c < POSITIVITY_FLOOR) {
                return Control::Halt(Termination::PositivityViolation);
            }
            if output {
                match Sample::from_shape(t, y[4], ShapeState::new(y[0], y[1], y[2], y[3])) {
                    Ok(s) => samples.push(s),
                    Err(e) => {
                        failed = Some(e);
                        return Control::Halt(Termination::StepFailure);
                    }
                }
            }
            Control::Continue
        },
    );
    if let Some(e) = failed {
        return Err(e);
    }
    Ok((halted(out.stop), out.error_estimate, out.steps))
}

/// Integrates the shape system from a strictly positive state. u is
/// measured from t0.
pub fn integrate_shape(start: ShapeState, t0: f64, t1: f64, tol: f64) -> Result<Trajectory> {
    let opts = StepOptions { rtol: tol, ..StepOptions::default() };
    integrate_shape_with(start, t0, t1, &opts)
}

pub fn integrate_shape_with(start: ShapeState, t0: f64, t1: f64, opts: &StepOptions) -> Result<Trajectory> {
    let mut samples = Vec::new();
    let (termination, error_estimate, steps) = run_shape(start, t0, 0.0, t1, opts, &mut samples)?;
    Ok(Trajectory { kind: ParamKind::T, samples, termination, projection_drift: 0.0, error_estimate, steps })
}

/// u(δ) = ∫₀^δ dt / |R(t)| along the series, by composite Simpson.
fn series_u(series: &SeriesStart, delta: f64) -> f64 {
    const N: usize = 64;
    let h = delta / N as f64;
    let g = |t: f64| 1.0 / norm(&series.state_at(t).to_array());
    let mut acc = g(0.0) + g(delta);
    for i in 1..N {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
    }
    acc * h / 3.0
}

/// Launch offset and initial data from the series start.
pub fn family_start(mu: f64, order: usize) -> Result<(SeriesStart, f64, ShapeState, f64)> {
    let series = series_start(mu, order)?;
    let delta = series.delta_max();
    let state = eval_series(&series, delta)?;
    let u0 = series_u(&series, delta);
    Ok((series, delta, state, u0))
}

/// The family member with parameter μ in t, from t = 0 to `t_max`.
pub fn family_shape(mu: f64, order: usize, t_max: f64, opts: &StepOptions) -> Result<Trajectory> {
    let (series, delta, state, u0) = family_start(mu, order)?;
    let mut samples = Vec::new();
    samples.push(Sample::from_shape(0.0, 0.0, series.state_at(0.0))?);
    let (termination, error_estimate, steps) = run_shape(state, delta, u0, t_max, opts, &mut samples)?;
    Ok(Trajectory { kind: ParamKind::T, samples, termination, projection_drift: 0.0, error_estimate, steps })
}

fn sphere_field(y: &[f64; 6]) -> Option<[f64; 6]> {
    let a = [y[0], y[1], y[2], y[3]];
    if a[1] == 0.0 || a[2] == 0.0 || a[3] == 0.0 {
        return None;
    }
    let (w, beta) = split(a);
    Some([w[0], w[1], w[2], w[3], beta, exp(y[4])])
}

fn renormalize(y: &mut [f64; 6]) -> f64 {
    let n = norm(&y[..4]);
    for c in y[..4].iter_mut() {
        *c /= n;
    }
    (n - 1.0).abs()
}

/// Sphere flow in u from (S, ln f, t) at u0 up to `u_max`; pushes output samples.
fn run_sphere(
    s: SphereState,
    ln_f: f64,
    t: f64,
    u0: f64,
    u_max: f64,
    opts: &StepOptions,
    samples: &mut Vec<Sample>,
) -> (Termination, f64, f64, usize) {
    let y0 = [s.alpha[0], s.alpha[1], s.alpha[2], s.alpha[3], ln_f, t];
    let out = integrate(
        |_, y| sphere_field(y),
        u0,
        y0,
        u_max,
        opts,
        renormalize,
        |u, y, output| {
            if output {
                let sp = SphereState::new(y[0], y[1], y[2], y[3]);
                samples.push(Sample::from_sphere(y[5], u, sp, exp(y[4])));
            }
            Control::Continue
        },
    );
    (halted(out.stop), out.max_projection, out.error_estimate, out.steps)
}

/// The family member with parameter μ as a sphere trajectory in u: the
/// series start is projected to S³ and continued by the sphere flow.
pub fn family_sphere(mu: f64, order: usize, u_max: f64, opts: &StepOptions) -> Result<Trajectory> {
    let (series, delta, state, u0) = family_start(mu, order)?;
    let (s, f) = to_sphere(&state)?;
    let mut samples = Vec::new();
    samples.push(Sample::from_shape(0.0, 0.0, series.state_at(0.0))?);
    let (termination, drift, err, steps) = run_sphere(s, ln(f), delta, u0, u_max, opts, &mut samples);
    Ok(Trajectory { kind: ParamKind::U, samples, termination, projection_drift: drift, error_estimate: err, steps })
}

/// Unit unstable direction of the chart flow at (0, 0, μ).
pub fn launch_direction(mu: f64) -> [f64; 3] {
    let d = [2.0, mu / sqrt(2.0 - 2.0 * mu * mu), 0.0];
    let n = norm(&d);
    d.map(|c| c / n)
}

/// The family member with parameter μ launched off the singular arc along
/// the unstable direction of the chart flow, continued by the sphere flow
/// once x ≥ [`CHART_SWITCH`]. Parameterised by u throughout; chart-phase
/// samples also carry v.
pub fn launch_sphere(mu: f64, eps: f64, u_max: f64, opts: &StepOptions) -> Result<Trajectory> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidParameter { name: "mu", value: mu });
    }
    if !(eps > 0.0 && eps <= MAX_LAUNCH_EPS) {
        return Err(Error::InvalidParameter { name: "eps", value: eps });
    }
    let e = launch_direction(mu);
    let p0 = ChartPoint::new(eps * e[0], eps * e[1], mu + eps * e[2]);
    if !(p0.radicand() >= MIN_RADICAND) {
        return Err(Error::InvalidChart { radicand: p0.radicand() });
    }
    // Near J, α₃ ≈ 2t and f ≈ 1, so u ≈ t ≈ x/2.
    let u0 = 0.5 * p0.x;
    let y0 = [p0.x, p0.y, p0.z, 0.0, u0, u0];
    let chart_opts = StepOptions { grid: None, ..*opts };
    let mut samples: Vec<Sample> = Vec::new();
    let mut failed = None;
    let out = integrate(
        |_, y: &[f64; 6]| {
            let p = ChartPoint::new(y[0], y[1], y[2]);
            let (m, xbeta) = modified_field_with_beta(&p).ok()?;
            Some([m[0], m[1], m[2], xbeta, y[0], exp(y[3]) * y[0]])
        },
        0.0,
        y0,
        CHART_V_LIMIT,
        &chart_opts,
        |_| 0.0,
        |v, y, _| match chart_to_sphere(&ChartPoint::new(y[0], y[1], y[2])) {
            Ok(sp) => {
                let mut s = Sample::from_sphere(y[5], y[4], sp, exp(y[3]));
                s.v = v;
                samples.push(s);
                if y[0] >= CHART_SWITCH {
                    Control::Halt(())
                } else {
                    Control::Continue
                }
            }
            Err(e) => {
                failed = Some(e);
                Control::Halt(())
            }
        },
    );
    if let Some(e) = failed {
        return Err(e);
    }
    let chart_steps = out.steps;
    let chart_err = out.error_estimate;
    if out.stop != Stop::Requested(()) {
        return Ok(Trajectory {
            kind: ParamKind::U,
            samples,
            termination: Termination::StepFailure,
            projection_drift: 0.0,
            error_estimate: chart_err,
            steps: chart_steps,
        });
    }
    let handover = *samples.last().expect("chart phase reports its start");
    let (termination, drift, err, steps) =
        run_sphere(handover.sphere, ln(handover.f), handover.t, handover.u, u_max, opts, &mut samples);
    // The handover point is reported by both phases.
    if samples.len() > 1 {
        let i = samples.iter().rposition(|s| s.u == handover.u && s.v.is_nan());
        if let Some(i) = i {
            samples.remove(i);
        }
    }
    Ok(Trajectory {
        kind: ParamKind::U,
        samples,
        termination,
        projection_drift: drift,
        error_estimate: chart_err + err,
        steps: chart_steps + steps,
    })
}
