//! Trigonometric polynomials on the torus.
//!
//! Perturbations and differential-form coefficients are finite sums of
//! `sin/cos(2π m·x)` with integer frequency vectors, so they are exactly
//! ℤⁿ-periodic, have closed-form derivatives, and carry an a-priori
//! Lipschitz bound that makes diffeomorphism checks decidable.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{norm, MatF};
use crate::math::{Real, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Sin,
    Cos,
}

impl Phase {
    #[inline]
    fn eval(self, arg: f64) -> f64 {
        match self {
            Phase::Sin => arg.sin(),
            Phase::Cos => arg.cos(),
        }
    }

    /// d/darg of the phase function.
    #[inline]
    fn deriv(self, arg: f64) -> f64 {
        match self {
            Phase::Sin => arg.cos(),
            Phase::Cos => -arg.sin(),
        }
    }
}

/// One vector-valued term `coeff · phase(2π freq · x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigTerm {
    pub coeff: Vec<f64>,
    pub freq: Vec<i64>,
    pub phase: Phase,
}

impl TrigTerm {
    pub fn new(coeff: Vec<f64>, freq: Vec<i64>, phase: Phase) -> Self {
        assert_eq!(coeff.len(), freq.len());
        Self { coeff, freq, phase }
    }
}

/// A trigonometric-polynomial perturbation `p(x) = s · Σ terms`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPerturbation {
    terms: Vec<TrigTerm>,
    amplitude: f64,
}

impl TrigPerturbation {
    pub fn new(terms: Vec<TrigTerm>, amplitude: f64) -> Self {
        assert!(amplitude >= 0.0);
        Self { terms, amplitude }
    }

    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            amplitude: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0 || self.terms.is_empty()
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    /// Same terms at a different overall scale.
    pub fn with_amplitude(&self, amplitude: f64) -> Self {
        Self::new(self.terms.clone(), amplitude)
    }

    #[inline]
    fn phase_arg(freq: &[i64], x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (&m, &c) in freq.iter().zip(x) {
            if m != 0 {
                s += m as f64 * c;
            }
        }
        TAU * s
    }

    /// Evaluates `p` at a lift (periodicity makes the lift choice irrelevant).
    pub fn eval(&self, x: &[f64], out: &mut [f64]) {
        for o in out.iter_mut() {
            *o = 0.0;
        }
        if self.is_zero() {
            return;
        }
        for t in &self.terms {
            let v = t.phase.eval(Self::phase_arg(&t.freq, x));
            for (o, &c) in out.iter_mut().zip(&t.coeff) {
                *o += self.amplitude * c * v;
            }
        }
    }

    /// Exact Jacobian `Dp(x)`; no finite differences anywhere.
    pub fn jacobian(&self, x: &[f64]) -> MatF {
        let n = x.len();
        let mut j = MatF::zeros(n, n);
        if self.is_zero() {
            return j;
        }
        for t in &self.terms {
            let d = t.phase.deriv(Self::phase_arg(&t.freq, x));
            for (r, &c) in t.coeff.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                for (col, &m) in t.freq.iter().enumerate() {
                    if m != 0 {
                        j[(r, col)] += self.amplitude * c * TAU * m as f64 * d;
                    }
                }
            }
        }
        j
    }

    /// Upper bound on `sup_x ‖Dp(x)‖₂`: each term is rank one with norm
    /// `‖coeff‖·2π·‖freq‖`, summed over terms and scaled by the amplitude.
    pub fn lipschitz_bound(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.amplitude
            * self
                .terms
                .iter()
                .map(|t| {
                    let fnorm: f64 =
                        Real::sqrt(t.freq.iter().map(|&m| (m * m) as f64).sum::<f64>());
                    norm(&t.coeff) * TAU * fnorm
                })
                .sum::<f64>()
    }
}

/// A scalar trigonometric polynomial, used for form coefficients and
/// potentials.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarTrigPoly {
    pub constant: f64,
    pub terms: Vec<(f64, Vec<i64>, Phase)>,
}

impl ScalarTrigPoly {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            terms: Vec::new(),
        }
    }

    pub fn single(amp: f64, freq: Vec<i64>, phase: Phase) -> Self {
        Self {
            constant: 0.0,
            terms: vec![(amp, freq, phase)],
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut v = self.constant;
        for (amp, freq, phase) in &self.terms {
            v += amp * phase.eval(TrigPerturbation::phase_arg(freq, x));
        }
        v
    }

    /// `|constant| + Σ |amp|`, a sup-norm bound.
    pub fn sup_bound(&self) -> f64 {
        Real::abs(self.constant) + self.terms.iter().map(|(a, _, _)| Real::abs(*a)).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_perturbation() -> TrigPerturbation {
        // p(x) = 0.01 (sin 2π x₂, 0)
        TrigPerturbation::new(
            vec![TrigTerm::new(vec![1.0, 0.0], vec![0, 1], Phase::Sin)],
            0.01,
        )
    }

    #[test]
    fn vanishes_at_origin() {
        let p = sample_perturbation();
        let mut out = [0.0; 2];
        p.eval(&[0.0, 0.0], &mut out);
        assert_eq!(out, [0.0, 0.0]);
    }

    #[test]
    fn jacobian_at_origin_matches_closed_form() {
        let p = sample_perturbation();
        let j = p.jacobian(&[0.0, 0.0]);
        assert!((j[(0, 1)] - 0.01 * TAU).abs() < 1e-15);
        assert_eq!(j[(0, 0)], 0.0);
        assert_eq!(j[(1, 0)], 0.0);
        assert_eq!(j[(1, 1)], 0.0);
    }

    #[test]
    fn periodic_under_integer_translation() {
        let p = sample_perturbation();
        let mut a = [0.0; 2];
        let mut b = [0.0; 2];
        p.eval(&[0.3, 0.7], &mut a);
        p.eval(&[1.3, -0.3], &mut b);
        assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_bound_dominates_samples() {
        let p = sample_perturbation();
        let bound = p.lipschitz_bound();
        assert!((bound - 0.01 * TAU).abs() < 1e-15);
        for i in 0..50 {
            let x = [0.0, i as f64 / 50.0];
            let j = p.jacobian(&x);
            assert!(j[(0, 1)].abs() <= bound + 1e-15);
        }
    }
}
