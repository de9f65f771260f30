//! Numerical construction of torsion-free G2 structures on deformed cones
//! over S³×S³ with metric
//!
//! ```text
//! dt² + Σ A_i² (η_i + η̃_i)² + Σ B_i² (η_i − η̃_i)²,   A₂ = A₃, B₂ = B₃.
//! ```
//!
//! The crate is `no_std` (it needs `alloc`) and is organised as:
//!
//! * [`exterior`]: forms on the orthonormal coframe, the G2 3-form, and the
//!   torsion residual used as an independent check of the shape ODE.
//! * [`flow`]: the shape vector field, its first integral, the projection to
//!   the unit sphere, the desingularised chart near the singular arc, the
//!   discrete symmetries and the monitor functionals.
//! * [`shoot`]: power-series start at the singular orbit, adaptive
//!   integration, launches off the singular arc, convergence detection and
//!   asymptotic (ALC) fits.
//! * [`analysis`]: stationary points and their linearisations, small
//!   eigenproblems, closed-form solutions and their verification.

#![no_std]
#![forbid(unsafe_code)]
// `!(x <= tol)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod exterior;
pub mod flow;
pub mod linalg;
pub(crate) mod math;
pub mod shoot;
pub mod state;

pub use error::{Error, Result};
pub use state::{DerivVector, ShapeState};
