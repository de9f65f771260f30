//! Trajectories of the family: series start at the singular orbit, launch
//! off the singular arc, adaptive integration, convergence and fits.

mod fit;
pub mod integrator;
mod launch;
mod series;
mod trajectory;

pub use fit::{
    alc_fit, detect_convergence, s_infinity, AlcFit, DEFAULT_CONVERGENCE_TOL, MIN_FIT_HORIZON, MIN_FIT_WINDOW,
};
pub use integrator::StepOptions;
pub use launch::{
    family_shape, family_sphere, family_start, integrate_shape, integrate_shape_with, launch_direction, launch_sphere,
    CHART_SWITCH, MAX_LAUNCH_EPS, POSITIVITY_FLOOR,
};
pub use series::{eval_series, series_start, SeriesStart, DEFAULT_ORDER, DELTA_CEILING, TRUNCATION_TARGET};
pub use trajectory::{ParamKind, Sample, Termination, Trajectory};

/// Default horizons.
pub const DEFAULT_T_MAX: f64 = 200.0;
pub const DEFAULT_U_MAX: f64 = 60.0;
