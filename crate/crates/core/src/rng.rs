//! Deterministic random and quasi-random point sources.
//!
//! Every estimator in the crate is required to be bit-reproducible given a
//! seed, so randomness comes from a fixed SplitMix64 stream (Steele et al.)
//! and volume-typical sample points come from the R_d additive recurrence
//! (generalized golden ratio). Neither depends on platform or build flags.

use alloc::vec::Vec;

use crate::math::{fract, Real};

/// SplitMix64 PRNG; tiny state, full 64-bit period, reproducible everywhere.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of entropy.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// A point with `dim` uniform coordinates in `[0, 1)`.
    pub fn next_point(&mut self, dim: usize) -> Vec<f64> {
        (0..dim).map(|_| self.next_f64()).collect()
    }
}

/// Low-discrepancy sequence on `[0,1)^dim` via the R_d additive recurrence.
///
/// The increments are powers of the unique real root of `x^(d+1) = x + 1`,
/// which equidistribute far better than pseudo-random draws at the sample
/// counts used here. `seed` rotates the starting offset so independent
/// experiments decorrelate.
#[derive(Clone, Debug)]
pub struct QuasiRandom {
    alphas: Vec<f64>,
    index: u64,
    offset: f64,
}

impl QuasiRandom {
    pub fn new(dim: usize, seed: u64) -> Self {
        // root of x^(d+1) = x + 1 by Newton iteration
        let d = dim as f64;
        let mut phi = 1.5;
        for _ in 0..64 {
            let f = Real::powi(phi, dim as i32 + 1) - phi - 1.0;
            let fp = (d + 1.0) * Real::powi(phi, dim as i32) - 1.0;
            phi -= f / fp;
        }
        let alphas = (1..=dim)
            .map(|k| fract(1.0 / Real::powi(phi, k as i32)))
            .collect();
        let offset = fract(seed as f64 * 0.6180339887498949 + 0.5);
        Self {
            alphas,
            index: 0,
            offset,
        }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        self.index += 1;
        let n = self.index as f64;
        self.alphas
            .iter()
            .map(|&a| fract(self.offset + n * a))
            .collect()
    }
}
