use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape state must be strictly positive, got {0:?}")]
    NonPositiveState([f64; 4]),

    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),

    #[error("cannot normalise the zero vector")]
    ZeroVector,

    #[error("chart point outside the chart domain (radicand {radicand})")]
    InvalidChart { radicand: f64 },

    #[error("parameter `{name}` = {value} outside its domain")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("r = {r} outside the domain of the closed-form curve")]
    OutOfDomain { r: f64 },

    #[error("torsion-free system inconsistent: least-squares residual {residual:e}")]
    Inconsistent { residual: f64 },

    #[error("point is not stationary: |field| = {norm:e}")]
    NotStationary { norm: f64 },

    #[error("matrix is defective: eigenvector residual {residual:e}")]
    Defective { residual: f64 },

    #[error("singular linear system")]
    Singular,

    #[error("symmetry index {0} outside 1..=5")]
    SymmetryIndex(usize),

    #[error("fit window too short: {0}")]
    InsufficientWindow(&'static str),

    #[error("trajectory precondition failed: {0}")]
    Trajectory(&'static str),
}
