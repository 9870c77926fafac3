//! Points on the n-torus ℝⁿ/ℤⁿ.

use alloc::vec::Vec;

use crate::math::{fract, wrap_dist, Real};

/// A point on 𝕋ⁿ with every coordinate reduced into `[0, 1)`.
///
/// Distances are always taken in the quotient metric — per-coordinate
/// wrap-around — never in the raw Euclidean metric of a lift.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    /// Reduces arbitrary lift coordinates into the fundamental domain.
    pub fn new(coords: &[f64]) -> Self {
        Self {
            coords: coords.iter().map(|&c| fract(c)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The canonical lift in `[0,1)ⁿ`.
    pub fn lift(&self) -> Vec<f64> {
        self.coords.clone()
    }

    /// Euclidean quotient distance: per-coordinate wrap, then the 2-norm.
    /// Equals the minimum of the Euclidean distance over all integer
    /// translates of the lift.
    pub fn dist(&self, other: &TorusPoint) -> f64 {
        quotient_dist(&self.coords, &other.coords)
    }
}

/// Quotient distance between two lifts (coordinates need not be reduced).
pub fn quotient_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let d = wrap_dist(x, y);
        s += d * d;
    }
    Real::sqrt(s)
}
