//! Partial-hyperbolicity rate constants.

use crate::math::Real;
use crate::{Error, Result};

/// The rate chain `0 < λ_s < λ'_c ≤ 1 ≤ λ''_c < λ_u` with the comparison
/// constant `c₁ ≥ 1`. Violating the chain is a construction error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PHConstants {
    pub lambda_s: f64,
    pub lambda_c_lo: f64,
    pub lambda_c_hi: f64,
    pub lambda_u: f64,
    pub c1: f64,
}

impl PHConstants {
    pub fn new(
        lambda_s: f64,
        lambda_c_lo: f64,
        lambda_c_hi: f64,
        lambda_u: f64,
        c1: f64,
    ) -> Result<Self> {
        let chain_ok = 0.0 < lambda_s
            && lambda_s < lambda_c_lo
            && lambda_c_lo <= 1.0
            && 1.0 <= lambda_c_hi
            && lambda_c_hi < lambda_u;
        if !chain_ok || c1 < 1.0 {
            return Err(Error::RateChain);
        }
        Ok(Self {
            lambda_s,
            lambda_c_lo,
            lambda_c_hi,
            lambda_u,
            c1,
        })
    }

    /// Constants for a hyperbolic automorphism with extreme moduli
    /// `λ_min < 1 < λ_max` and possibly a neutral center.
    pub fn for_moduli(lambda_min: f64, lambda_max: f64) -> Result<Self> {
        Self::new(lambda_min * 0.999, 0.999, 1.001, lambda_max * 1.001, 1.0)
    }

    /// Log-scale thresholds separating stable/center/unstable exponent
    /// bands, widened by `margin` on each side.
    pub fn band_thresholds(&self, margin: f64) -> (f64, f64) {
        (self.lambda_c_lo.ln() - margin, self.lambda_c_hi.ln() + margin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_chain() {
        let c = PHConstants::new(0.38, 0.99, 1.01, 2.6, 1.0).unwrap();
        let (lo, hi) = c.band_thresholds(0.1);
        assert!(lo < 0.0 && hi > 0.0);
    }

    #[test]
    fn rejects_broken_chain() {
        assert!(PHConstants::new(1.2, 0.99, 1.01, 2.6, 1.0).is_err());
        assert!(PHConstants::new(0.38, 1.05, 1.01, 2.6, 1.0).is_err());
        assert!(PHConstants::new(0.38, 0.99, 1.01, 0.9, 1.0).is_err());
        assert!(PHConstants::new(0.38, 0.99, 1.01, 2.6, 0.5).is_err());
    }
}
