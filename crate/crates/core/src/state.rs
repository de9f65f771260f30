//! Metric coefficients and their t-derivatives.

use crate::error::{Error, Result};

/// The quadruple (A₁, A₂, B₁, B₂) at one value of t (with A₃ = A₂, B₃ = B₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeState {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

impl ShapeState {
    pub const fn new(a1: f64, a2: f64, b1: f64, b2: f64) -> Self {
        Self { a1, a2, b1, b2 }
    }

    pub const fn from_array(r: [f64; 4]) -> Self {
        Self::new(r[0], r[1], r[2], r[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.a1, self.a2, self.b1, self.b2]
    }

    pub fn scaled(self, c: f64) -> Self {
        Self::from_array(self.to_array().map(|x| c * x))
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.to_array().iter().all(|x| *x > 0.0)
    }

    pub fn require_positive(self) -> Result<Self> {
        if self.is_strictly_positive() {
            Ok(self)
        } else {
            Err(Error::NonPositiveState(self.to_array()))
        }
    }
}

/// (dA₁/dt, dA₂/dt, dB₁/dt, dB₂/dt).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DerivVector {
    pub da1: f64,
    pub da2: f64,
    pub db1: f64,
    pub db2: f64,
}

impl DerivVector {
    pub const fn new(da1: f64, da2: f64, db1: f64, db2: f64) -> Self {
        Self { da1, da2, db1, db2 }
    }

    pub const fn from_array(d: [f64; 4]) -> Self {
        Self::new(d[0], d[1], d[2], d[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.da1, self.da2, self.db1, self.db2]
    }
}
