//! Skew product of the suspension flow over a circle map:
//! `(q, y) ↦ (g_{1+sin 2πy}(q), α_ε(y))`.
//!
//! The fiber over a fixed point y* of the circle map is invariant, and the
//! restriction there is the time-(1 + sin 2πy*) map of the flow. Entropy of
//! the whole product is realized on those fibers, which is what makes the
//! saddle-node discontinuity computable at desk scale.

use crate::circle::CircleMap;
use crate::math::{Real, TAU};
use crate::suspension::{MappingTorusPoint, SuspensionFlow};

/// Flow time attached to the circle coordinate `y`.
#[inline]
pub fn fiber_speed(y: f64) -> f64 {
    1.0 + (TAU * y).sin()
}

#[derive(Clone, Debug)]
pub struct SkewProductMap {
    pub flow: SuspensionFlow,
    pub circle: CircleMap,
}

impl SkewProductMap {
    pub fn new(flow: SuspensionFlow, circle: CircleMap) -> Self {
        Self { flow, circle }
    }

    pub fn apply(&self, q: &MappingTorusPoint, y: f64) -> (MappingTorusPoint, f64) {
        (self.flow.flow(q, fiber_speed(y)), self.circle.apply(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::IntegerMatrix;
    use crate::torus::TorusPoint;

    fn skew() -> SkewProductMap {
        SkewProductMap::new(
            SuspensionFlow::new(IntegerMatrix::cat()).unwrap(),
            CircleMap::new(0.05, 0.0).unwrap(),
        )
    }

    #[test]
    fn fixed_fiber_at_zero_advances_time_one() {
        let f = skew();
        let q = MappingTorusPoint::new(TorusPoint::new(&[0.3, 0.7]), 0.2);
        let (q1, y1) = f.apply(&q, 0.0);
        assert_eq!(y1, 0.0);
        let expected = f.flow.flow(&q, 1.0);
        assert!(q1.base.dist(&expected.base) < 1e-15);
        assert!((q1.height - expected.height).abs() < 1e-15);
    }

    #[test]
    fn quarter_fiber_advances_time_two() {
        let f = skew();
        let q = MappingTorusPoint::new(TorusPoint::new(&[0.5, 0.5]), 0.0);
        let (q1, y1) = f.apply(&q, 0.25);
        assert!((y1 - 0.25).abs() < 1e-15, "y = 0.25 is fixed");
        let expected = f.flow.flow(&q, 2.0);
        assert!(q1.base.dist(&expected.base) < 1e-12);
        assert!((q1.height - expected.height).abs() < 1e-12);
    }

    #[test]
    fn components_match_standalone_maps() {
        let f = skew();
        let mut rng = crate::rng::SplitMix64::new(3);
        for _ in 0..50 {
            let q = MappingTorusPoint::new(
                TorusPoint::new(&[rng.next_f64(), rng.next_f64()]),
                rng.next_f64(),
            );
            let y = rng.next_f64();
            let (q1, y1) = f.apply(&q, y);
            assert!((y1 - f.circle.apply(y)).abs() < 1e-15);
            let base = f.flow.flow(&q, fiber_speed(y));
            assert!(q1.base.dist(&base.base) < 1e-12);
            assert!((q1.height - base.height).abs() < 1e-12);
        }
    }

    #[test]
    fn speeds_at_unperturbed_fixed_points() {
        assert!((fiber_speed(0.0) - 1.0).abs() < 1e-15);
        assert!((fiber_speed(0.25) - 2.0).abs() < 1e-15);
        assert!((fiber_speed(0.5) - 1.0).abs() < 1e-12);
    }
}
