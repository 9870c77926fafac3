//! Lyapunov spectra along orbits, exponent band classification, and the
//! center-term entropy margin.

use alloc::vec::Vec;

use crate::circle::CircleMap;
use crate::diffeo::TrackedMap;
use crate::linalg::{self, MatF};
use crate::math::Real;
use crate::ph::PHConstants;
use crate::{Error, Result};

/// Dynamics with a tangent map: one step and the derivative at the source.
/// Positions are reduced per coordinate mod 1 between steps (all phase
/// spaces here are tori or circles), keeping orbits bounded.
pub trait TangentDynamics {
    fn dim(&self) -> usize;
    fn step_with_jacobian(&self, x: &[f64]) -> Result<(Vec<f64>, MatF)>;
}

impl TangentDynamics for TrackedMap<'_> {
    fn dim(&self) -> usize {
        TrackedMap::dim(self)
    }
    fn step_with_jacobian(&self, x: &[f64]) -> Result<(Vec<f64>, MatF)> {
        TrackedMap::step_with_jacobian(self, x)
    }
}

impl TangentDynamics for CircleMap {
    fn dim(&self) -> usize {
        1
    }
    fn step_with_jacobian(&self, x: &[f64]) -> Result<(Vec<f64>, MatF)> {
        let mut j = MatF::zeros(1, 1);
        j[(0, 0)] = self.derivative(x[0]);
        Ok((alloc::vec![self.lift_apply(x[0])], j))
    }
}

/// Sorted exponents with per-exponent convergence gaps (difference between
/// the estimates using all N steps and the first N/2).
#[derive(Clone, Debug)]
pub struct LyapunovSpectrum {
    pub exponents: Vec<f64>,
    pub convergence_gaps: Vec<f64>,
    pub seed_point: Vec<f64>,
    pub iterates: usize,
}

impl LyapunovSpectrum {
    pub fn sum(&self) -> f64 {
        self.exponents.iter().sum()
    }
}

const BURN_IN: usize = 256;

/// QR-style exponent estimation: an orthonormal frame is pushed along the
/// orbit, re-orthonormalized every `reorth_every` steps, and the log
/// diagonal factors are averaged. A burn-in aligns the frame with the
/// invariant flag before accumulation starts, so constant-cocycle spectra
/// are exact to rounding.
pub fn lyapunov_spectrum<M: TangentDynamics>(
    map: &M,
    x: &[f64],
    iterates: usize,
    reorth_every: usize,
) -> Result<LyapunovSpectrum> {
    assert!(iterates >= 1_000, "need at least 10^3 iterates");
    assert!(reorth_every >= 1);
    let n = map.dim();
    let mut rng = crate::rng::SplitMix64::new(0x1f0_0d + n as u64);
    let mut frame: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.next_f64() - 0.5).collect())
        .collect();
    linalg::orthonormalize(&mut frame);
    let mut pos = x.to_vec();
    for _ in 0..BURN_IN {
        let (next, j) = map.step_with_jacobian(&pos)?;
        for v in frame.iter_mut() {
            *v = j.mul_vec(v);
        }
        linalg::orthonormalize(&mut frame);
        pos = crate::diffeo::reduce(&next);
    }

    let mut sums = alloc::vec![0.0f64; n];
    let mut half_sums = alloc::vec![0.0f64; n];
    let mut since_reorth = 0usize;
    for step in 1..=iterates {
        let (next, j) = map.step_with_jacobian(&pos)?;
        for v in frame.iter_mut() {
            *v = j.mul_vec(v);
        }
        pos = crate::diffeo::reduce(&next);
        since_reorth += 1;
        if since_reorth == reorth_every || step == iterates {
            let diag = linalg::orthonormalize(&mut frame);
            for (s, &d) in sums.iter_mut().zip(&diag) {
                if !d.is_finite() || d <= 0.0 {
                    return Err(Error::TangentOverflow { step });
                }
                *s += d.ln();
            }
            since_reorth = 0;
        }
        if step == iterates / 2 {
            half_sums.copy_from_slice(&sums);
        }
    }

    let mut pairs: Vec<(f64, f64)> = sums
        .iter()
        .zip(&half_sums)
        .map(|(&s, &h)| {
            let full = s / iterates as f64;
            let half = h / (iterates / 2) as f64;
            (full, Real::abs(full - half))
        })
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    Ok(LyapunovSpectrum {
        exponents: pairs.iter().map(|p| p.0).collect(),
        convergence_gaps: pairs.iter().map(|p| p.1).collect(),
        seed_point: x.to_vec(),
        iterates,
    })
}

/// Log-scale thresholds splitting exponents into stable/center/unstable
/// bands, derived from the rate constants with a safety margin.
#[derive(Clone, Copy, Debug)]
pub struct ExponentBands {
    pub lower: f64,
    pub upper: f64,
}

impl ExponentBands {
    pub fn from_constants(c: &PHConstants, margin: f64) -> Self {
        let (lower, upper) = c.band_thresholds(margin);
        Self { lower, upper }
    }
}

/// Exponents grouped by band, with the summed positive center term.
#[derive(Clone, Debug)]
pub struct ClassifiedExponents {
    pub stable: Vec<f64>,
    pub center: Vec<f64>,
    pub unstable: Vec<f64>,
    /// Σ over center exponents of max(λ, 0)
    pub center_term: f64,
    /// exponents within 1e-3 of a band boundary: classified, but flagged
    pub ambiguous: Vec<f64>,
}

pub fn classify_exponents(spectrum: &LyapunovSpectrum, bands: ExponentBands) -> ClassifiedExponents {
    let mut out = ClassifiedExponents {
        stable: Vec::new(),
        center: Vec::new(),
        unstable: Vec::new(),
        center_term: 0.0,
        ambiguous: Vec::new(),
    };
    for &e in &spectrum.exponents {
        if Real::abs(e - bands.lower) < 1e-3 || Real::abs(e - bands.upper) < 1e-3 {
            out.ambiguous.push(e);
        }
        if e < bands.lower {
            out.stable.push(e);
        } else if e > bands.upper {
            out.unstable.push(e);
        } else {
            out.center.push(e);
            if e > 0.0 {
                out.center_term += e;
            }
        }
    }
    out
}

/// Margin of the center-term entropy estimate:
/// `Σ_{λ_c > 0} λ_c + χ_u − h_ν`. Nonnegative (up to estimator error) when
/// the inequality holds; a negative margin is a reported violation, not a
/// panic.
pub fn refined_pesin_ruelle_check(h_nu_hat: f64, center_term: f64, chi_u_hat: f64) -> f64 {
    center_term + chi_u_hat - h_nu_hat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffeo::ToralDiffeo;
    use crate::intmat::IntegerMatrix;
    use crate::trig::{Phase, TrigPerturbation, TrigTerm};

    const LOG_GOLDEN: f64 = 0.9624236501192069;

    fn ph3() -> ToralDiffeo {
        ToralDiffeo::linear_map(IntegerMatrix::new(3, vec![2, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap())
    }

    #[test]
    fn cat_spectrum_is_plus_minus_log_lambda() {
        let f = ToralDiffeo::linear_map(IntegerMatrix::cat());
        let s = lyapunov_spectrum(&TrackedMap::forward(&f), &[0.21, 0.68], 10_000, 1).unwrap();
        assert!((s.exponents[0] - LOG_GOLDEN).abs() < 1e-8);
        assert!((s.exponents[1] + LOG_GOLDEN).abs() < 1e-8);
        assert!(s.sum().abs() < 1e-8);
    }

    #[test]
    fn block_matrix_has_exact_zero_center_exponent() {
        let f = ph3();
        let s = lyapunov_spectrum(&TrackedMap::forward(&f), &[0.1, 0.2, 0.7], 10_000, 1).unwrap();
        assert!((s.exponents[0] - LOG_GOLDEN).abs() < 1e-8);
        assert!(s.exponents[1].abs() < 1e-8);
        assert!((s.exponents[2] + LOG_GOLDEN).abs() < 1e-8);
    }

    #[test]
    fn circle_rotation_exponent_vanishes() {
        let rot = CircleMap::new(1e-9, 0.37).unwrap();
        let s = lyapunov_spectrum(&rot, &[0.5], 2_000, 1).unwrap();
        assert!(s.exponents[0].abs() < 1e-7);
    }

    #[test]
    fn volume_preserving_perturbation_keeps_zero_sum() {
        let p = TrigPerturbation::new(
            vec![TrigTerm::new(vec![2.0, 1.0], vec![0, 1], Phase::Sin)],
            0.02,
        );
        let f = ToralDiffeo::new(IntegerMatrix::cat(), p).unwrap();
        let s = lyapunov_spectrum(&TrackedMap::forward(&f), &[0.3, 0.4], 20_000, 1).unwrap();
        assert!(s.sum().abs() < 1e-6, "sum {}", s.sum());
    }

    #[test]
    fn inverse_spectrum_is_reversed_negation() {
        for f in [
            ToralDiffeo::linear_map(IntegerMatrix::cat()),
            ph3(),
            ToralDiffeo::linear_map(IntegerMatrix::cat().direct_sum(&IntegerMatrix::cat())),
        ] {
            let n = f.dim();
            let x: Vec<f64> = (0..n).map(|i| 0.17 + 0.13 * i as f64).collect();
            let fwd = lyapunov_spectrum(&TrackedMap::forward(&f), &x, 10_000, 1).unwrap();
            let bwd = lyapunov_spectrum(&TrackedMap::inverse(&f), &x, 10_000, 1).unwrap();
            for (a, b) in fwd.exponents.iter().zip(bwd.exponents.iter().rev()) {
                assert!((a + b).abs() < 1e-5, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn reorth_gap_too_large_overflows() {
        let f = ToralDiffeo::linear_map(IntegerMatrix::cat());
        match lyapunov_spectrum(&TrackedMap::forward(&f), &[0.2, 0.5], 2_000, 1_000) {
            Err(Error::TangentOverflow { .. }) => {}
            other => panic!("expected overflow advisory, got {other:?}"),
        }
    }

    #[test]
    fn classification_of_block_spectrum() {
        let f = ph3();
        let s = lyapunov_spectrum(&TrackedMap::forward(&f), &[0.4, 0.9, 0.3], 5_000, 1).unwrap();
        let consts = PHConstants::for_moduli(1.0 / LOG_GOLDEN.exp(), LOG_GOLDEN.exp()).unwrap();
        let grouped = classify_exponents(&s, ExponentBands::from_constants(&consts, 0.1));
        assert_eq!(grouped.unstable.len(), 1);
        assert_eq!(grouped.center.len(), 1);
        assert_eq!(grouped.stable.len(), 1);
        assert_eq!(grouped.center_term, 0.0);
        assert!(grouped.ambiguous.is_empty());
    }

    #[test]
    fn all_zero_spectrum_is_all_center() {
        let s = LyapunovSpectrum {
            exponents: vec![0.0, 0.0],
            convergence_gaps: vec![0.0, 0.0],
            seed_point: vec![0.0, 0.0],
            iterates: 1_000,
        };
        let grouped = classify_exponents(
            &s,
            ExponentBands {
                lower: -0.1,
                upper: 0.1,
            },
        );
        assert_eq!(grouped.center.len(), 2);
        assert_eq!(grouped.center_term, 0.0);
    }

    #[test]
    fn boundary_exponent_is_flagged() {
        let s = LyapunovSpectrum {
            exponents: vec![0.1004, -0.5],
            convergence_gaps: vec![0.0, 0.0],
            seed_point: vec![0.0],
            iterates: 1_000,
        };
        let grouped = classify_exponents(
            &s,
            ExponentBands {
                lower: -0.1,
                upper: 0.1,
            },
        );
        assert_eq!(grouped.ambiguous.len(), 1);
        assert_eq!(grouped.unstable.len(), 1);
    }

    #[test]
    fn margin_is_additive() {
        assert_eq!(refined_pesin_ruelle_check(0.0, 0.0, 0.0), 0.0);
        let m = refined_pesin_ruelle_check(0.96, 0.0, LOG_GOLDEN);
        assert!(m.abs() < 0.1);
    }
}
