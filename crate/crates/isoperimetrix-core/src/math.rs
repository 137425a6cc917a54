//! Scalar math shims.
//!
//! The crate builds without `std`, where the inherent `f64` transcendental
//! methods are unavailable; everything routes through here instead. With the
//! `std` feature the plain methods are used, otherwise `libm`. `erf`, `erfc`
//! and `tgamma` always come from `libm` since the standard library has no
//! counterpart.

#[cfg(feature = "std")]
macro_rules! shim {
    ($name:ident, $method:ident) => {
        #[inline]
        pub fn $name(x: f64) -> f64 {
            x.$method()
        }
    };
}

#[cfg(not(feature = "std"))]
macro_rules! shim {
    ($name:ident, $method:ident) => {
        #[inline]
        pub fn $name(x: f64) -> f64 {
            libm::$name(x)
        }
    };
}

shim!(exp, exp);
shim!(log, ln);
shim!(log1p, ln_1p);
shim!(expm1, exp_m1);
shim!(sqrt, sqrt);
shim!(cbrt, cbrt);
shim!(fabs, abs);
shim!(floor, floor);
shim!(ceil, ceil);

#[cfg(feature = "std")]
#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    x.powf(y)
}

#[cfg(not(feature = "std"))]
#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

#[inline]
pub fn tgamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// ln(2 pi) / 2, the Gaussian log-normalization.
pub const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;

/// 1 / sqrt(2 pi), the standard normal density at 0.
pub const INV_SQRT_TWO_PI: f64 = 0.398_942_280_401_432_7;

pub const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// Standard normal density.
#[inline]
pub fn normal_pdf(x: f64) -> f64 {
    exp(-0.5 * x * x) * INV_SQRT_TWO_PI
}

/// Standard normal CDF via the complementary error function; accurate in
/// both tails.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Upper tail of the standard normal.
#[inline]
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}
