//! Torsion of the G2 structure along an integrated shape trajectory.

use crate::error::{Error, Result};
use crate::exterior::torsion_residual;
use crate::flow::rhs;
use crate::math::abs;
use crate::shoot::{ParamKind, Trajectory};
use crate::state::DerivVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionAlong {
    /// Max residual with derivatives from the shape field.
    pub analytic: f64,
    /// Max residual with derivatives differenced from the samples.
    pub differenced: f64,
    /// Samples at which both were evaluated.
    pub evaluated: usize,
}

/// Evaluates at every `every`-th sample that has three equally spaced
/// neighbours on each side; derivatives by the seven-point central stencil
/// (sixth order, so the steep start near t = 0 stays resolved).
pub fn torsion_along(traj: &Trajectory, every: usize) -> Result<TorsionAlong> {
    if traj.kind != ParamKind::T {
        return Err(Error::Trajectory("torsion along a trajectory needs t-parameterised samples"));
    }
    let s = &traj.samples;
    let every = every.max(1);
    let mut out = TorsionAlong { analytic: 0.0, differenced: 0.0, evaluated: 0 };
    const W: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
    for i in (3..s.len().saturating_sub(3)).step_by(every) {
        let h = s[i + 1].t - s[i].t;
        let uniform = (-3..=3).all(|k: isize| {
            let j = (i as isize + k) as usize;
            abs(s[j].t - s[i].t - k as f64 * h) <= 1e-9 * h
        });
        if !uniform || !s[i].shape.is_strictly_positive() {
            continue;
        }
        let r = |k: usize| s[k].shape.to_array();
        let d: [f64; 4] =
            core::array::from_fn(|c| (0..3).map(|k| W[k] * (r(i + k + 1)[c] - r(i - k - 1)[c])).sum::<f64>() / h);
        let fd = torsion_residual(&s[i].shape, &DerivVector::from_array(d))?;
        let exact = torsion_residual(&s[i].shape, &rhs(&s[i].shape)?)?;
        out.differenced = out.differenced.max(fd.max());
        out.analytic = out.analytic.max(exact.max());
        out.evaluated += 1;
    }
    Ok(out)
}
