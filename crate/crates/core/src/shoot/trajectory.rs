use alloc::vec::Vec;

use crate::error::Result;
use crate::flow::{monitors, tangential_field, to_sphere, MonitorVector, SphereState};
use crate::state::ShapeState;

/// Which variable parameterises a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Arc length t of the metric.
    T,
    /// u with dt = f du, the parameter of the sphere flow.
    U,
    /// v with du = x dv, the parameter of the desingularised chart flow.
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ReachedHorizon,
    ConvergedToTarget,
    PositivityViolation,
    StepFailure,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::ReachedHorizon => "reached-horizon",
            Termination::ConvergedToTarget => "converged-to-target",
            Termination::PositivityViolation => "positivity-violation",
            Termination::StepFailure => "step-failure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub u: f64,
    /// Chart-flow parameter; NaN outside the chart phase.
    pub v: f64,
    pub shape: ShapeState,
    pub sphere: SphereState,
    pub f: f64,
    pub monitors: MonitorVector,
}

impl Sample {
    pub fn from_shape(t: f64, u: f64, shape: ShapeState) -> Result<Self> {
        let (sphere, f) = to_sphere(&shape)?;
        Ok(Self { t, u, v: f64::NAN, shape, sphere, f, monitors: monitors(&sphere, f) })
    }

    /// `sphere` is used as given (assumed unit); the shape is f·S.
    pub fn from_sphere(t: f64, u: f64, sphere: SphereState, f: f64) -> Self {
        let shape = ShapeState::from_array(sphere.alpha.map(|a| f * a));
        Self { t, u, v: f64::NAN, shape, sphere, f, monitors: monitors(&sphere, f) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kind: ParamKind,
    pub samples: Vec<Sample>,
    pub termination: Termination,
    /// Largest sphere renormalisation correction, zero when not projected.
    pub projection_drift: f64,
    /// Accumulated local error estimate of the integrator.
    pub error_estimate: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn param(&self, s: &Sample) -> f64 {
        match self.kind {
            ParamKind::T => s.t,
            ParamKind::U => s.u,
            ParamKind::V => s.v,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        self.samples.iter().map(|s| self.param(s)).collect()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Keeps every `stride`-th sample and the last one.
    pub fn decimated(&self, stride: usize) -> Trajectory {
        let stride = stride.max(1);
        let n = self.samples.len();
        let samples =
            self.samples.iter().enumerate().filter(|(i, _)| i % stride == 0 || *i + 1 == n).map(|(_, s)| *s).collect();
        Trajectory { samples, ..self.clone() }
    }

    /// Max relative deviation of F from its first sample.
    pub fn integral_drift(&self) -> f64 {
        let vals: Vec<f64> = self.samples.iter().filter_map(|s| s.monitors.f_integral).collect();
        let Some(f0) = vals.first().copied() else { return 0.0 };
        let scale = f0.abs().max(1.0);
        vals.iter().fold(0.0_f64, |m, v| m.max((v - f0).abs() / scale))
    }

    /// Point where component `index` of S first crosses `level`, with its u.
    /// Interpolates in u by cubic Hermite using dS/du = W(S).
    pub fn sphere_at_level(&self, index: usize, level: f64) -> Option<(f64, SphereState)> {
        let pairs = self.samples.windows(2);
        for w in pairs {
            let (a, b) = (&w[0], &w[1]);
            let (ga, gb) = (a.sphere.alpha[index] - level, b.sphere.alpha[index] - level);
            if ga == 0.0 {
                return Some((a.u, a.sphere));
            }
            if ga * gb > 0.0 {
                continue;
            }
            let h = b.u - a.u;
            let (wa, wb) = (tangential_field(&a.sphere).ok()?, tangential_field(&b.sphere).ok()?);
            let herm = |i: usize, s: f64| {
                let (h00, h10, h01, h11) = (
                    (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
                    s * (1.0 - s) * (1.0 - s),
                    s * s * (3.0 - 2.0 * s),
                    s * s * (s - 1.0),
                );
                h00 * a.sphere.alpha[i] + h10 * h * wa[i] + h01 * b.sphere.alpha[i] + h11 * h * wb[i]
            };
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if (herm(index, mid) - level) * ga > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let s = 0.5 * (lo + hi);
            let p: [f64; 4] = core::array::from_fn(|i| herm(i, s));
            return SphereState::normalized(p).ok().map(|sp| (a.u + s * h, sp));
        }
        None
    }
}
