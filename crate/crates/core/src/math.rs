//! Float helpers for `no_std` builds.
//!
//! The crate never touches `std`, so every transcendental goes through
//! [`libm`]. The [`Real`] extension trait keeps call sites readable
//! (`x.sin()` instead of `libm::sin(x)`) and pins one implementation for
//! reproducible output across builds.

/// 2π, the period of every map on the torus.
pub const TAU: f64 = 6.283185307179586476925286766559;

/// `f64` math routed through `libm`.
pub trait Real: Sized {
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn floor(self) -> Self;
    fn ceil(self) -> Self;
    fn round(self) -> Self;
    fn hypot(self, other: Self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn atan2(self, other: Self) -> Self;
}

impl Real for f64 {
    #[inline]
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    #[inline]
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    #[inline]
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        libm::log(self)
    }
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    #[inline]
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    #[inline]
    fn ceil(self) -> f64 {
        libm::ceil(self)
    }
    #[inline]
    fn round(self) -> f64 {
        libm::round(self)
    }
    #[inline]
    fn hypot(self, other: f64) -> f64 {
        libm::hypot(self, other)
    }
    fn powi(self, n: i32) -> f64 {
        let mut acc = 1.0;
        let mut base = if n < 0 { 1.0 / self } else { self };
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
    #[inline]
    fn atan2(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }
}

/// Fractional part in `[0, 1)`, also for negative inputs.
#[inline]
pub fn fract(x: f64) -> f64 {
    let f = x - Real::floor(x);
    // floor(x) == x leaves exactly 0.0; rounding can otherwise yield 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance between two reals modulo 1.
#[inline]
pub fn wrap_dist(a: f64, b: f64) -> f64 {
    let d = Real::abs(fract(a) - fract(b));
    if d > 0.5 {
        1.0 - d
    } else {
        d
    }
}
