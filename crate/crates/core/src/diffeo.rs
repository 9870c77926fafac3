//! Trig-perturbed toral diffeomorphisms `f(x) = A·x + p(x) mod ℤⁿ`.

use alloc::vec::Vec;

use crate::intmat::IntegerMatrix;
use crate::linalg::{self, MatF};
use crate::math::fract;
use crate::torus::{quotient_dist, TorusPoint};
use crate::trig::TrigPerturbation;
use crate::{Error, Result};

const INVERT_BUDGET: usize = 200;
const INVERT_RESIDUAL: f64 = 1e-12;

/// A diffeomorphism of 𝕋ⁿ homotopic to the automorphism of its linear part.
///
/// Construction certifies invertibility: the perturbation's differential is
/// bounded by `Σ ‖coeff‖·2π·‖freq‖`, and the map is accepted only when that
/// bound stays below `1/‖A⁻¹‖`, which also makes the inverse iteration a
/// contraction with factor `q = ‖A⁻¹‖·Lip(p) < 1`.
#[derive(Clone, Debug)]
pub struct ToralDiffeo {
    linear: IntegerMatrix,
    inverse_linear: IntegerMatrix,
    perturbation: TrigPerturbation,
    contraction: f64,
}

impl ToralDiffeo {
    pub fn new(linear: IntegerMatrix, perturbation: TrigPerturbation) -> Result<Self> {
        let inv = linear.inverse();
        let inv_norm = linalg::singular_values(&inv.to_matf())[0];
        let lip = perturbation.lipschitz_bound();
        let contraction = inv_norm * lip;
        if contraction >= 1.0 {
            return Err(Error::DiffeoBound {
                lipschitz: lip,
                limit: 1.0 / inv_norm,
            });
        }
        Ok(Self {
            linear,
            inverse_linear: inv,
            perturbation,
            contraction,
        })
    }

    /// Purely linear automorphism (p ≡ 0).
    pub fn linear_map(a: IntegerMatrix) -> Self {
        Self::new(a, TrigPerturbation::zero()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    /// The homotopy data: the linear part, untouched by any amplitude.
    pub fn linear(&self) -> &IntegerMatrix {
        &self.linear
    }

    pub fn perturbation(&self) -> &TrigPerturbation {
        &self.perturbation
    }

    /// Contraction factor of the inverse iteration, `‖A⁻¹‖·Lip(p)`.
    pub fn contraction(&self) -> f64 {
        self.contraction
    }

    pub fn is_linear(&self) -> bool {
        self.perturbation.is_zero()
    }

    /// The map on a lift: `A·x + p(x)`, commuting with integer translations.
    pub fn lift_apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.linear.apply_lift(x);
        if !self.perturbation.is_zero() {
            let mut p = alloc::vec![0.0; x.len()];
            self.perturbation.eval(x, &mut p);
            for (yi, pi) in y.iter_mut().zip(&p) {
                *yi += pi;
            }
        }
        y
    }

    pub fn apply(&self, x: &TorusPoint) -> TorusPoint {
        TorusPoint::new(&self.lift_apply(&x.lift()))
    }

    /// Exact differential `A + Dp(x)` (analytic derivative of the trig terms).
    pub fn differential_lift(&self, x: &[f64]) -> MatF {
        let mut d = self.linear.to_matf();
        if !self.perturbation.is_zero() {
            let j = self.perturbation.jacobian(x);
            for (di, ji) in d.data.iter_mut().zip(&j.data) {
                *di += ji;
            }
        }
        d
    }

    pub fn differential(&self, x: &TorusPoint) -> MatF {
        self.differential_lift(&x.lift())
    }

    /// Unique lifted preimage of `y` under the lifted map, by the contraction
    /// `x ← A⁻¹(y − p(x))`. Non-convergence within the budget means the
    /// diffeomorphism bound is violated and is reported as an error.
    ///
    /// The iteration runs on the reduced representative of `y`, where the
    /// fixed point sits in a bounded box and the step tolerance is
    /// resolvable; the integer translate is restored afterwards through
    /// `F⁻¹(y + K) = F⁻¹(y) + A⁻¹K`.
    pub fn invert_lift(&self, y: &[f64]) -> Result<Vec<f64>> {
        if self.perturbation.is_zero() {
            return Ok(self.inverse_linear.apply_lift(y));
        }
        let n = self.dim();
        let y_red: Vec<f64> = y.iter().map(|&c| fract(c)).collect();
        let translate: Vec<f64> = y.iter().zip(&y_red).map(|(a, b)| a - b).collect();
        let mut x = self.inverse_linear.apply_lift(&y_red);
        let mut p = alloc::vec![0.0; n];
        let mut shifted = alloc::vec![0.0; n];
        for _ in 0..INVERT_BUDGET {
            self.perturbation.eval(&x, &mut p);
            for i in 0..n {
                shifted[i] = y_red[i] - p[i];
            }
            let next = self.inverse_linear.apply_lift(&shifted);
            let step: f64 = next
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
            x = next;
            if step < 1e-28 {
                let image = self.lift_apply(&x);
                if quotient_dist(&image, &y_red) < INVERT_RESIDUAL {
                    let back = self.inverse_linear.apply_lift(&translate);
                    for (xi, bi) in x.iter_mut().zip(&back) {
                        *xi += bi;
                    }
                    return Ok(x);
                }
            }
        }
        Err(Error::InverseDiverged {
            budget: INVERT_BUDGET,
        })
    }

    pub fn invert(&self, y: &TorusPoint) -> Result<TorusPoint> {
        Ok(TorusPoint::new(&self.invert_lift(&y.lift())?))
    }
}

/// Orientation of iteration: the map itself or its inverse.
///
/// Stable-side quantities are unstable-side quantities of the inverse, so
/// every estimator takes a `TrackedMap` rather than a bare diffeomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDirection {
    Forward,
    Inverse,
}

/// A toral diffeomorphism together with an iteration direction, exposing the
/// lifted step and its derivative at the source point.
#[derive(Clone, Copy, Debug)]
pub struct TrackedMap<'a> {
    pub map: &'a ToralDiffeo,
    pub direction: MapDirection,
}

impl<'a> TrackedMap<'a> {
    pub fn forward(map: &'a ToralDiffeo) -> Self {
        Self {
            map,
            direction: MapDirection::Forward,
        }
    }

    pub fn inverse(map: &'a ToralDiffeo) -> Self {
        Self {
            map,
            direction: MapDirection::Inverse,
        }
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    pub fn reversed(&self) -> Self {
        Self {
            map: self.map,
            direction: match self.direction {
                MapDirection::Forward => MapDirection::Inverse,
                MapDirection::Inverse => MapDirection::Forward,
            },
        }
    }

    pub fn lift_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self.direction {
            MapDirection::Forward => Ok(self.map.lift_apply(x)),
            MapDirection::Inverse => self.map.invert_lift(x),
        }
    }

    pub fn apply(&self, x: &TorusPoint) -> Result<TorusPoint> {
        Ok(TorusPoint::new(&self.lift_apply(&x.lift())?))
    }

    /// Derivative at `x` of the map being applied. For the inverse direction
    /// this is `[Df(f⁻¹x)]⁻¹`.
    pub fn jacobian(&self, x: &[f64]) -> Result<MatF> {
        match self.direction {
            MapDirection::Forward => Ok(self.map.differential_lift(x)),
            MapDirection::Inverse => {
                let pre = self.map.invert_lift(x)?;
                let d = self.map.differential_lift(&pre);
                linalg::inverse(&d).ok_or(Error::SingularDifferential)
            }
        }
    }

    /// Image point and derivative at `x` in one call.
    pub fn step_with_jacobian(&self, x: &[f64]) -> Result<(Vec<f64>, MatF)> {
        match self.direction {
            MapDirection::Forward => {
                Ok((self.map.lift_apply(x), self.map.differential_lift(x)))
            }
            MapDirection::Inverse => {
                let pre = self.map.invert_lift(x)?;
                let d = self.map.differential_lift(&pre);
                let j = linalg::inverse(&d).ok_or(Error::SingularDifferential)?;
                Ok((pre, j))
            }
        }
    }
}

/// Reduce a lift to torus coordinates.
pub fn reduce(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&c| fract(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::TAU;
    use crate::rng::SplitMix64;
    use crate::trig::{Phase, TrigTerm};

    fn perturbed_cat(s: f64) -> ToralDiffeo {
        // volume-preserving shear: p(x) = s·(2,1)·sin(2π x₂) = s·(A v) sin(2π m·x)
        // with v = (1,0), m = (0,1), v·m = 0
        let p = TrigPerturbation::new(
            alloc::vec![TrigTerm::new(alloc::vec![2.0, 1.0], alloc::vec![0, 1], Phase::Sin)],
            s,
        );
        ToralDiffeo::new(IntegerMatrix::cat(), p).unwrap()
    }

    #[test]
    fn cat_map_apply_examples() {
        let f = ToralDiffeo::linear_map(IntegerMatrix::cat());
        let y = f.apply(&TorusPoint::new(&[0.5, 0.5]));
        assert!((y.coords()[0] - 0.5).abs() < 1e-15);
        assert!(y.coords()[1].abs() < 1e-15);
        let origin = f.apply(&TorusPoint::new(&[0.0, 0.0]));
        assert_eq!(origin.coords(), &[0.0, 0.0]);
    }

    #[test]
    fn perturbation_fixes_origin_when_sin_based() {
        let p = TrigPerturbation::new(
            alloc::vec![TrigTerm::new(alloc::vec![1.0, 0.0], alloc::vec![0, 1], Phase::Sin)],
            0.01,
        );
        let f = ToralDiffeo::new(IntegerMatrix::cat(), p).unwrap();
        let y = f.apply(&TorusPoint::new(&[0.0, 0.0]));
        assert_eq!(y.coords(), &[0.0, 0.0]);
    }

    #[test]
    fn differential_is_linear_part_plus_trig_jacobian() {
        let f = ToralDiffeo::linear_map(IntegerMatrix::cat());
        let d = f.differential(&TorusPoint::new(&[0.23, 0.71]));
        assert_eq!(d.data, alloc::vec![2.0, 1.0, 1.0, 1.0]);

        let p = TrigPerturbation::new(
            alloc::vec![TrigTerm::new(alloc::vec![1.0, 0.0], alloc::vec![0, 1], Phase::Sin)],
            0.01,
        );
        let g = ToralDiffeo::new(IntegerMatrix::cat(), p).unwrap();
        let d0 = g.differential(&TorusPoint::new(&[0.0, 0.0]));
        assert!((d0[(0, 1)] - (1.0 + 0.01 * TAU)).abs() < 1e-15);
    }

    #[test]
    fn differential_matches_central_differences() {
        let f = perturbed_cat(0.015);
        let mut rng = SplitMix64::new(11);
        let h = 1e-5;
        for _ in 0..10 {
            let x = rng.next_point(2);
            let d = f.differential_lift(&x);
            for col in 0..2 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[col] += h;
                xm[col] -= h;
                let fp = f.lift_apply(&xp);
                let fm = f.lift_apply(&xm);
                for row in 0..2 {
                    let fd = (fp[row] - fm[row]) / (2.0 * h);
                    assert!(
                        (fd - d[(row, col)]).abs() < 1e-6,
                        "finite difference mismatch at ({row},{col})"
                    );
                }
            }
        }
    }

    #[test]
    fn invert_examples() {
        let f = ToralDiffeo::linear_map(IntegerMatrix::cat());
        let x = f.invert(&TorusPoint::new(&[0.5, 0.0])).unwrap();
        assert!((x.coords()[0] - 0.5).abs() < 1e-15);
        assert!((x.coords()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn apply_then_invert_is_identity() {
        let f = perturbed_cat(0.01);
        let mut rng = SplitMix64::new(5);
        for _ in 0..1000 {
            let y = TorusPoint::new(&rng.next_point(2));
            let x = f.invert(&y).unwrap();
            let back = f.apply(&x);
            assert!(back.dist(&y) < 1e-12);
        }
    }

    #[test]
    fn oversized_perturbation_is_rejected() {
        let p = TrigPerturbation::new(
            alloc::vec![TrigTerm::new(alloc::vec![1.0, 1.0], alloc::vec![1, 1], Phase::Cos)],
            0.5,
        );
        match ToralDiffeo::new(IntegerMatrix::cat(), p) {
            Err(Error::DiffeoBound { .. }) => {}
            other => panic!("expected diffeomorphism-bound rejection, got {other:?}"),
        }
    }

    #[test]
    fn homotopy_data_is_amplitude_independent() {
        let a = perturbed_cat(0.0);
        let b = perturbed_cat(0.02);
        assert_eq!(a.linear().entries(), b.linear().entries());
    }

    #[test]
    fn tracked_inverse_jacobian_is_matrix_inverse() {
        let f = perturbed_cat(0.01);
        let fwd = TrackedMap::forward(&f);
        let inv = TrackedMap::inverse(&f);
        let y = alloc::vec![0.37, 0.81];
        let pre = f.invert_lift(&y).unwrap();
        let a = fwd.jacobian(&pre).unwrap();
        let b = inv.jacobian(&y).unwrap();
        let prod = a.mul(&b);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - want).abs() < 1e-10);
            }
        }
    }
}
