//! The circle diffeomorphism driving the saddle-node experiment.
//!
//! `α_ε(y) = y + c·(sin 2πy − sin² 2πy) + ε`. At ε = 0 the fixed points are
//! exactly {0, 1/4, 1/2}: repelling, parabolic (α′ = 1, α″ ≠ 0), and
//! attracting. Sliding ε through 0 runs the parabolic point through a
//! saddle-node bifurcation; which sign of ε annihilates the pair is decided
//! by the sign of α″ at the parabolic point and is computed, not assumed.

use alloc::vec::Vec;

use crate::math::{fract, Real, TAU};
use crate::{Error, Result};

const GRID: usize = 8192;
const TANGENT_TOL: f64 = 1e-11;

/// Fixed point of the circle map with its multiplier α′(y).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleFixedPoint {
    pub y: f64,
    pub multiplier: f64,
}

/// Orientation-preserving circle diffeomorphism `y ↦ y + c·g(y) + ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleMap {
    pub c: f64,
    pub epsilon: f64,
}

impl CircleMap {
    /// Rejects parameters for which α′ fails to stay positive (the map would
    /// no longer be an orientation-preserving diffeomorphism).
    pub fn new(c: f64, epsilon: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::CircleMapShape);
        }
        let map = Self { c, epsilon };
        let min_deriv = (0..GRID)
            .map(|i| map.derivative(i as f64 / GRID as f64))
            .fold(f64::INFINITY, f64::min);
        if min_deriv <= 0.0 {
            return Err(Error::CircleMapShape);
        }
        Ok(map)
    }

    /// Displacement `α_ε(y) − y` as a real-valued function (it never wraps
    /// for admissible parameters, so root finding stays on the line).
    #[inline]
    pub fn displacement(&self, y: f64) -> f64 {
        let s = (TAU * y).sin();
        self.c * (s - s * s) + self.epsilon
    }

    #[inline]
    pub fn apply(&self, y: f64) -> f64 {
        fract(y + self.displacement(y))
    }

    /// Lifted map, used when the circle coordinate rides along an orbit.
    #[inline]
    pub fn lift_apply(&self, y: f64) -> f64 {
        y + self.displacement(y)
    }

    /// α′(y) = 1 + c·2π·cos 2πy·(1 − 2 sin 2πy).
    #[inline]
    pub fn derivative(&self, y: f64) -> f64 {
        let th = TAU * y;
        1.0 + self.c * TAU * th.cos() * (1.0 - 2.0 * th.sin())
    }

    /// α″(y) = c·(2π)²·(−sin 2πy + 2 sin² 2πy − 2 cos² 2πy).
    #[inline]
    pub fn second_derivative(&self, y: f64) -> f64 {
        let th = TAU * y;
        let (s, co) = (th.sin(), th.cos());
        self.c * TAU * TAU * (-s + 2.0 * s * s - 2.0 * co * co)
    }

    /// All fixed points on the circle within `tol`, with multipliers.
    ///
    /// Simple roots come from sign-change bracketing on a fine grid plus
    /// bisection. Tangential roots (the parabolic point at ε = 0) produce no
    /// sign change, so extrema of the displacement are located through its
    /// derivative and accepted when the residual is at noise level.
    pub fn fixed_points(&self, tol: f64) -> Vec<CircleFixedPoint> {
        assert!(tol > 0.0);
        let n = GRID;
        let h: Vec<f64> = (0..=n).map(|i| self.displacement(i as f64 / n as f64)).collect();
        let mut roots: Vec<f64> = Vec::new();

        for i in 0..n {
            let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            if h[i] == 0.0 {
                roots.push(a);
                continue;
            }
            if h[i] * h[i + 1] < 0.0 {
                roots.push(bisect(|y| self.displacement(y), a, b));
            }
        }

        // tangencies: bracket zeros of the derivative of the displacement
        let dh = |y: f64| self.derivative(y) - 1.0;
        for i in 0..n {
            let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            let (da, db) = (dh(a), dh(b));
            if da == 0.0 || da * db < 0.0 {
                let y = if da == 0.0 { a } else { bisect(dh, a, b) };
                if Real::abs(self.displacement(y)) <= TANGENT_TOL * (1.0 + self.c) {
                    roots.push(y);
                }
            }
        }

        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let merge = Real::abs(tol).max(1e-9) * 2.0;
        let mut out: Vec<CircleFixedPoint> = Vec::new();
        for y in roots {
            let y = fract(y);
            let dup = out
                .iter()
                .any(|r| crate::math::wrap_dist(r.y, y) < merge);
            if !dup {
                out.push(CircleFixedPoint {
                    y,
                    multiplier: self.derivative(y),
                });
            }
        }
        out
    }

    /// Sign of ε on which the parabolic pair annihilates, determined from
    /// α″ at the parabolic fixed point of the ε = 0 map. Returns `None`
    /// when no parabolic point exists (no saddle node to speak of).
    pub fn annihilation_side(&self) -> Option<f64> {
        let base = CircleMap {
            c: self.c,
            epsilon: 0.0,
        };
        let parabolic = base
            .fixed_points(1e-10)
            .into_iter()
            .min_by(|a, b| {
                let da = Real::abs(a.multiplier - 1.0);
                let db = Real::abs(b.multiplier - 1.0);
                da.partial_cmp(&db).unwrap()
            })?;
        if Real::abs(parabolic.multiplier - 1.0) > 1e-6 {
            return None;
        }
        let curv = base.second_derivative(parabolic.y);
        if curv == 0.0 {
            None
        } else if curv > 0.0 {
            Some(1.0)
        } else {
            Some(-1.0)
        }
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}
