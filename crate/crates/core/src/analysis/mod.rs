//! Stationary points of the sphere flow, small eigenproblems, and the
//! explicit solutions used as oracles.

mod along;
mod closed_form;
mod eigen;
mod stationary;

pub use along::{torsion_along, TorsionAlong};
pub use closed_form::{
    closed_form, lapse, linspace, r_to_t, verify_solution, ClosedFormCurve, ClosedFormKind, VerifyReport,
};
pub use eigen::{characteristic_polynomial, eig_small, polynomial_roots, Eigen, MAX_DIM, RESIDUAL_TOL};
pub use stationary::{
    linearize, s_infinity, s_one, stationary_points, stationary_report, symmetry_orbit, tangent_basis, Linearization,
    StationaryReport, JACOBIAN_STEP, STATIONARY_TOL, ZERO_EIGENVALUE_TOL,
};
