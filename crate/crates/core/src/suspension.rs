//! Suspension flow of a hyperbolic toral automorphism over a unit roof.
//!
//! The phase space is the mapping torus of 𝕋²: the quotient of 𝕋² × [0,1]
//! by the identification (x, 1) ~ (A x, 0). The vertical unit-speed flow is
//! Anosov, and its time-t maps scale entropy linearly in |t| — the property
//! the saddle-node experiment rides on.

use alloc::vec::Vec;

use crate::intmat::IntegerMatrix;
use crate::math::{fract, Real};
use crate::torus::{quotient_dist, TorusPoint};
use crate::{Error, Result};

/// A point of the mapping torus: a base point on 𝕋² and a height in [0, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct MappingTorusPoint {
    pub base: TorusPoint,
    pub height: f64,
}

impl MappingTorusPoint {
    pub fn new(base: TorusPoint, height: f64) -> Self {
        assert!((0.0..1.0).contains(&height));
        Self { base, height }
    }
}

/// Unit-roof suspension of a hyperbolic 2×2 automorphism.
#[derive(Clone, Debug)]
pub struct SuspensionFlow {
    base_map: IntegerMatrix,
    inverse_map: IntegerMatrix,
}

impl SuspensionFlow {
    /// Requires a 2×2 base with no eigenvalue on the unit circle.
    pub fn new(base_map: IntegerMatrix) -> Result<Self> {
        if base_map.dim() != 2 {
            return Err(Error::Dimension);
        }
        // 2×2 unimodular: hyperbolic iff |trace| > 2 (real spectrum off the
        // unit circle); |trace| = 2 gives parabolic, < 2 elliptic.
        let trace = base_map.at(0, 0) + base_map.at(1, 1);
        if trace.abs() <= 2 {
            return Err(Error::NotHyperbolic { trace });
        }
        let inverse_map = base_map.inverse();
        Ok(Self {
            base_map,
            inverse_map,
        })
    }

    pub fn base_map(&self) -> &IntegerMatrix {
        &self.base_map
    }

    /// Flows a point for time `t`; each roof crossing applies the base map
    /// (its inverse for downward crossings).
    pub fn flow(&self, q: &MappingTorusPoint, t: f64) -> MappingTorusPoint {
        let total = q.height + t;
        let crossings = Real::floor(total) as i64;
        let height = fract(total);
        let base = if crossings == 0 {
            q.base.clone()
        } else {
            let m = if crossings > 0 {
                self.base_map.pow(crossings)
            } else {
                self.inverse_map.pow(-crossings)
            };
            TorusPoint::new(&m.apply_mod(&q.base.lift()))
        };
        MappingTorusPoint { base, height }
    }

    /// Distance on the mapping torus: the max of the base quotient metric
    /// and the height gap, minimized over going directly or through the
    /// roof in either direction.
    pub fn dist(&self, p: &MappingTorusPoint, q: &MappingTorusPoint) -> f64 {
        let direct = max2(
            p.base.dist(&q.base),
            Real::abs(p.height - q.height),
        );
        // p flows up through the roof, becoming (A p_base, 0)
        let up_gap = (1.0 - p.height) + q.height;
        let up = if up_gap < direct {
            let moved = TorusPoint::new(&self.base_map.apply_mod(&p.base.lift()));
            max2(moved.dist(&q.base), up_gap)
        } else {
            f64::INFINITY
        };
        // q flows up through the roof instead
        let down_gap = p.height + (1.0 - q.height);
        let down = if down_gap < direct {
            let moved = TorusPoint::new(&self.base_map.apply_mod(&q.base.lift()));
            max2(p.base.dist(&moved), down_gap)
        } else {
            f64::INFINITY
        };
        direct.min(up).min(down)
    }

    /// Bucket embeddings for neighbor lookups: the point itself, plus a
    /// roof-shifted alias when it sits within `margin` of the roof, so
    /// pairs that are close *through* the identification land in adjacent
    /// cells.
    pub fn embed_aliases(&self, p: &MappingTorusPoint, margin: f64, out: &mut Vec<[f64; 3]>) {
        out.clear();
        let b = p.base.coords();
        out.push([b[0], b[1], p.height]);
        if p.height < margin {
            let shifted = self.inverse_map.apply_mod(b);
            out.push([shifted[0], shifted[1], p.height + 1.0]);
        } else if p.height > 1.0 - margin {
            let shifted = self.base_map.apply_mod(b);
            out.push([shifted[0], shifted[1], p.height - 1.0]);
        }
    }
}

#[inline]
fn max2(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

/// Consistency helper used by the alias machinery: distance between raw
/// embeddings with the height axis treated linearly and base axes wrapped.
pub fn embedding_dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let base = quotient_dist(&a[..2], &b[..2]);
    max2(base, Real::abs(a[2] - b[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat_suspension() -> SuspensionFlow {
        SuspensionFlow::new(IntegerMatrix::cat()).unwrap()
    }

    fn point(x: f64, y: f64, h: f64) -> MappingTorusPoint {
        MappingTorusPoint::new(TorusPoint::new(&[x, y]), h)
    }

    #[test]
    fn zero_time_is_identity() {
        let s = cat_suspension();
        let q = point(0.3, 0.7, 0.5);
        assert_eq!(s.flow(&q, 0.0), q);
    }

    #[test]
    fn sub_roof_flow_just_raises_height() {
        let s = cat_suspension();
        let q = s.flow(&point(0.3, 0.7, 0.5), 0.25);
        assert_eq!(q.base.coords(), &[0.3, 0.7]);
        assert!((q.height - 0.75).abs() < 1e-15);
    }

    #[test]
    fn roof_crossing_applies_base_map() {
        let s = cat_suspension();
        let q = s.flow(&point(0.5, 0.5, 0.9), 0.2);
        assert!((q.base.coords()[0] - 0.5).abs() < 1e-15);
        assert!(q.base.coords()[1].abs() < 1e-15);
        assert!((q.height - 0.1).abs() < 1e-12);
    }

    #[test]
    fn flow_composes_over_time() {
        let s = cat_suspension();
        let mut rng = crate::rng::SplitMix64::new(17);
        for _ in 0..100 {
            let q = point(rng.next_f64(), rng.next_f64(), rng.next_f64());
            let t1 = (rng.next_f64() - 0.5) * 6.0;
            let t2 = (rng.next_f64() - 0.5) * 6.0;
            let one_shot = s.flow(&q, t1 + t2);
            let two_step = s.flow(&s.flow(&q, t1), t2);
            assert!(one_shot.base.dist(&two_step.base) < 1e-12);
            assert!((one_shot.height - two_step.height).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_time_undoes_positive_time() {
        let s = cat_suspension();
        let q = point(0.21, 0.84, 0.35);
        let forward = s.flow(&q, 2.4);
        let back = s.flow(&forward, -2.4);
        assert!(back.base.dist(&q.base) < 1e-12);
        assert!((back.height - q.height).abs() < 1e-12);
    }

    #[test]
    fn elliptic_base_is_rejected() {
        let rot = IntegerMatrix::new(2, alloc::vec![0, -1, 1, 0]).unwrap();
        assert!(SuspensionFlow::new(rot).is_err());
    }

    #[test]
    fn distance_sees_through_the_roof() {
        let s = cat_suspension();
        let p = point(0.5, 0.5, 0.98);
        // the image of (0.5, 0.5) under the cat map is (0.5, 0.0)
        let q = point(0.5, 0.001, 0.01);
        let d = s.dist(&p, &q);
        assert!(d < 0.05, "roof-crossed distance {d}");
        // naive direct comparison would be ~0.5 in base or ~0.97 in height
        assert!(Real::abs(p.height - q.height) > 0.9);
    }
}
