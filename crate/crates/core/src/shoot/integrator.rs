//! Dormand–Prince 5(4) with step-size control on fixed-size states.
//!
//! Accepted steps can be forced to land on a uniform output grid; grid
//! points (and the initial and final points) are then flagged as output.
//! Without a grid, every accepted step is an output point.

use crate::math::{abs, powf, sqrt};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// 5th-order weights (equal to the last row of `A`, FSAL).
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
/// B − B̂, the embedded error weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Output grid spacing; `None` reports every accepted step.
    pub grid: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, grid: Some(0.01), h_max: f64::INFINITY, max_steps: 5_000_000 }
    }
}

/// Reason the integration loop ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop<R> {
    Horizon,
    StepFailure,
    Requested(R),
}

/// Verdict of the per-step callback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control<R> {
    Continue,
    /// Stop after the point just reported.
    Halt(R),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome<const N: usize, R> {
    pub stop: Stop<R>,
    pub t: f64,
    pub y: [f64; N],
    pub steps: usize,
    pub rejected: usize,
    /// Σ over accepted steps of the ∞-norm of the embedded error vector.
    pub error_estimate: f64,
    /// Largest correction applied by the projection hook.
    pub max_projection: f64,
}

fn add_scaled<const N: usize>(y: &[f64; N], h: f64, k: &[[f64; N]; 7], w: &[f64], upto: usize) -> [f64; N] {
    let mut out = *y;
    for (s, ks) in k.iter().enumerate().take(upto) {
        let c = w[s];
        if c != 0.0 {
            for i in 0..N {
                out[i] += h * c * ks[i];
            }
        }
    }
    out
}

/// Integrates y' = f(t, y) from `t0` to `t1`.
///
/// `f` returns `None` when the state leaves the field's domain; the step is
/// then retried with a smaller h. `project` may modify the state after each
/// accepted step and returns the size of its correction. `report` sees the
/// initial point and every accepted step, with a flag marking output points,
/// and decides whether to continue.
pub fn integrate<const N: usize, R, F, P, S>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &StepOptions,
    mut project: P,
    mut report: S,
) -> Outcome<N, R>
where
    F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
    P: FnMut(&mut [f64; N]) -> f64,
    S: FnMut(f64, &[f64; N], bool) -> Control<R>,
{
    let mut out =
        Outcome { stop: Stop::Horizon, t: t0, y: y0, steps: 0, rejected: 0, error_estimate: 0.0, max_projection: 0.0 };
    if let Control::Halt(reason) = report(t0, &y0, true) {
        out.stop = Stop::Requested(reason);
        return out;
    }
    let Some(mut k0) = f(t0, &y0) else {
        out.stop = Stop::StepFailure;
        return out;
    };

    let span = t1 - t0;
    let (mut t, mut y) = (t0, y0);
    let mut comp = [0.0; N];
    let scale0: f64 = sqrt(y0.iter().map(|v| v * v).sum::<f64>() / N as f64).max(1e-3);
    let d1: f64 = sqrt(k0.iter().map(|v| v * v).sum::<f64>() / N as f64).max(1e-12);
    let mut h = (0.01 * scale0 / d1).min(span).min(opts.h_max);
    if let Some(g) = opts.grid {
        h = h.min(g);
    }
    let next_grid = |t: f64| -> Option<f64> {
        opts.grid.map(|g| {
            let mut n = libm::floor(t / g + 1e-9) + 1.0;
            while n * g <= t * (1.0 + 1e-14) + 1e-300 {
                n += 1.0;
            }
            n * g
        })
    };
    let mut target = next_grid(t);

    while t < t1 {
        if out.steps + out.rejected >= opts.max_steps {
            out.stop = Stop::StepFailure;
            break;
        }
        let mut stop_at = t1;
        if let Some(g) = target {
            stop_at = stop_at.min(g);
        }
        let h_free = h;
        let mut landing = false;
        if t + h >= stop_at - 1e-12 * abs(stop_at).max(1.0) {
            h = stop_at - t;
            landing = true;
        }
        if h <= 1e-14 * abs(t).max(1.0) {
            out.stop = Stop::StepFailure;
            break;
        }

        let mut k = [[0.0; N]; 7];
        k[0] = k0;
        let mut ok = true;
        for s in 1..7 {
            let ys = add_scaled(&y, h, &k, &A[s], s);
            match f(t + C[s] * h, &ys) {
                Some(v) if v.iter().all(|x| x.is_finite()) => k[s] = v,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            out.rejected += 1;
            h *= 0.25;
            continue;
        }
        // Compensated update: the increment is small against y over long runs.
        let incr = add_scaled(&[0.0; N], h, &k, &B, 7);
        let mut y_new = y;
        let mut comp_new = comp;
        for i in 0..N {
            let d = incr[i] - comp[i];
            let s = y[i] + d;
            comp_new[i] = (s - y[i]) - d;
            y_new[i] = s;
        }
        let err_vec: [f64; N] = core::array::from_fn(|i| h * (0..7).map(|s| E[s] * k[s][i]).sum::<f64>());
        let err = sqrt(
            (0..N)
                .map(|i| {
                    let sc = opts.atol + opts.rtol * abs(y[i]).max(abs(y_new[i]));
                    let e = err_vec[i] / sc;
                    e * e
                })
                .sum::<f64>()
                / N as f64,
        );
        if !(err <= 1.0) {
            out.rejected += 1;
            let fac = if err.is_finite() { (0.9 * powf(err, -0.2)).max(0.2) } else { 0.2 };
            h *= fac;
            continue;
        }

        // accepted
        out.steps += 1;
        out.error_estimate += err_vec.iter().fold(0.0_f64, |m, e| m.max(abs(*e)));
        t = if landing { stop_at } else { t + h };
        y = y_new;
        comp = comp_new;
        let correction = project(&mut y);
        if correction != 0.0 {
            comp = [0.0; N];
        }
        out.max_projection = out.max_projection.max(correction);
        k0 = if correction == 0.0 {
            k[6]
        } else {
            match f(t, &y) {
                Some(v) => v,
                None => {
                    out.stop = Stop::StepFailure;
                    break;
                }
            }
        };
        let on_grid = target.is_some_and(|g| landing && stop_at == g);
        if on_grid {
            target = next_grid(t);
        }
        let output = opts.grid.is_none() || on_grid || t >= t1;
        if let Control::Halt(reason) = report(t, &y, output) {
            out.stop = Stop::Requested(reason);
            break;
        }

        let fac = if err == 0.0 { 5.0 } else { (0.9 * powf(err, -0.2)).clamp(0.2, 5.0) };
        // A shortened landing step says nothing about the attainable step size.
        h = (h * fac).max(if landing { h_free } else { 0.0 }).min(opts.h_max);
    }
    out.t = t;
    out.y = y;
    out
}
