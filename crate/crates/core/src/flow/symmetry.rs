//! Signed permutations of (α₁, α₂, α₃, α₄) that map solutions to solutions.
//! Two of them also reverse the flow parameter.

use alloc::vec::Vec;

use super::sphere::SphereState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symmetry {
    index: usize,
    signs: [f64; 4],
    perm: [usize; 4],
    reverses: bool,
}

impl Symmetry {
    pub const COUNT: usize = 5;

    pub fn new(k: usize) -> Result<Self> {
        let (signs, perm, reverses) = match k {
            1 => ([-1.0, 1.0, 1.0, 1.0], [0, 3, 2, 1], false),
            2 => ([-1.0, 1.0, 1.0, -1.0], [0, 1, 2, 3], true),
            3 => ([-1.0, -1.0, 1.0, 1.0], [0, 1, 2, 3], true),
            4 => ([1.0, 1.0, -1.0, -1.0], [0, 1, 2, 3], false),
            5 => ([1.0, -1.0, -1.0, 1.0], [0, 1, 2, 3], false),
            _ => return Err(Error::SymmetryIndex(k)),
        };
        Ok(Self { index: k, signs, perm, reverses })
    }

    pub fn all() -> [Symmetry; Self::COUNT] {
        core::array::from_fn(|i| Self::new(i + 1).expect("index in range"))
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Whether the flow parameter changes sign under this map.
    pub fn reverses_time(&self) -> bool {
        self.reverses
    }

    pub fn map(&self, v: [f64; 4]) -> [f64; 4] {
        core::array::from_fn(|i| self.signs[i] * v[self.perm[i]])
    }
}

pub fn apply_symmetry(s: &SphereState, k: usize) -> Result<SphereState> {
    Ok(SphereState { alpha: Symmetry::new(k)?.map(s.alpha) })
}

/// Maps a sampled path (u, S). Reversing maps negate u and reorder the
/// samples so the parameter stays increasing.
pub fn apply_symmetry_to_path(path: &[(f64, SphereState)], k: usize) -> Result<Vec<(f64, SphereState)>> {
    let sym = Symmetry::new(k)?;
    let mut out: Vec<(f64, SphereState)> = path
        .iter()
        .map(|(u, s)| (if sym.reverses { -u } else { *u }, SphereState { alpha: sym.map(s.alpha) }))
        .collect();
    if sym.reverses {
        out.reverse();
    }
    Ok(out)
}
