//! Convergence to a limit direction and affine fits of the metric functions.

use super::trajectory::{ParamKind, Trajectory};
use crate::error::{Error, Result};
pub use crate::flow::s_infinity;
use crate::flow::SphereState;

pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-6;
/// Shortest admissible fit window in t.
pub const MIN_FIT_WINDOW: f64 = 10.0;
/// Shortest admissible horizon for a fit.
pub const MIN_FIT_HORIZON: f64 = 30.0;

/// Parameter value after which every sample lies within `tol` of `target`.
pub fn detect_convergence(traj: &Trajectory, target: &SphereState, tol: f64) -> (bool, Option<f64>) {
    let first_inside = traj
        .samples
        .iter()
        .rposition(|s| s.sphere.distance(target) > tol)
        .map_or(Some(0), |i| (i + 1 < traj.samples.len()).then_some(i + 1));
    match first_inside {
        Some(i) if !traj.samples.is_empty() => (true, Some(traj.param(&traj.samples[i]))),
        _ => (false, None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlcFit {
    /// Per function (A₁, A₂, B₁, B₂).
    pub slopes: [f64; 4],
    pub intercepts: [f64; 4],
    pub window: (f64, f64),
    /// max over the window of |1 − value / fitted value|.
    pub max_deviation: f64,
}

/// Least-squares affine fits over the trailing `window_fraction` of a
/// t-parameterised trajectory.
pub fn alc_fit(traj: &Trajectory, window_fraction: f64) -> Result<AlcFit> {
    if traj.kind != ParamKind::T {
        return Err(Error::Trajectory("affine fits need a t-parameterised trajectory"));
    }
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(Error::InvalidParameter { name: "window_fraction", value: window_fraction });
    }
    let Some(last) = traj.samples.last() else {
        return Err(Error::InsufficientWindow("empty trajectory"));
    };
    let t_hi = last.t;
    if t_hi < MIN_FIT_HORIZON {
        return Err(Error::InsufficientWindow("horizon below 30"));
    }
    let t_lo = t_hi * (1.0 - window_fraction);
    if t_hi - t_lo < MIN_FIT_WINDOW {
        return Err(Error::InsufficientWindow("window shorter than 10"));
    }
    let window: alloc::vec::Vec<_> = traj.samples.iter().filter(|s| s.t >= t_lo).collect();
    if window.len() < 3 {
        return Err(Error::InsufficientWindow("fewer than three samples"));
    }
    let n = window.len() as f64;
    let t_mean = window.iter().map(|s| s.t).sum::<f64>() / n;
    let stt: f64 = window.iter().map(|s| (s.t - t_mean) * (s.t - t_mean)).sum();
    let mut slopes = [0.0; 4];
    let mut intercepts = [0.0; 4];
    for i in 0..4 {
        let y_mean = window.iter().map(|s| s.shape.to_array()[i]).sum::<f64>() / n;
        let sty: f64 = window.iter().map(|s| (s.t - t_mean) * (s.shape.to_array()[i] - y_mean)).sum();
        slopes[i] = sty / stt;
        intercepts[i] = y_mean - slopes[i] * t_mean;
    }
    let max_deviation = window.iter().fold(0.0_f64, |m, s| {
        let r = s.shape.to_array();
        (0..4).fold(m, |m, i| m.max((1.0 - r[i] / (slopes[i] * s.t + intercepts[i])).abs()))
    });
    Ok(AlcFit { slopes, intercepts, window: (t_lo, t_hi), max_deviation })
}
