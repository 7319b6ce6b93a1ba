//! Scalar float helpers that work identically with and without `std`.
//!
//! The crate compiles without the standard library, where the inherent
//! `f64` transcendental methods are unavailable; these wrappers dispatch to
//! [`libm`] in that configuration and to the (usually faster) inherent
//! methods otherwise.

#[inline]
pub fn abs(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.abs()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::fabs(x)
    }
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sqrt()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sqrt(x)
    }
}

#[inline]
pub fn exp(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.exp()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::exp(x)
    }
}

#[inline]
pub fn exp2(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.exp2()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::exp2(x)
    }
}

#[inline]
pub fn ln(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.ln()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::log(x)
    }
}

#[inline]
pub fn log2(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.log2()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::log2(x)
    }
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.ceil()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::ceil(x)
    }
}

#[inline]
pub fn sin(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sin()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sin(x)
    }
}

#[inline]
pub fn cos(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.cos()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::cos(x)
    }
}

/// Sine and cosine in one call.
#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    #[cfg(feature = "std")]
    {
        x.sin_cos()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sincos(x)
    }
}

/// Unnormalized sinc, `sin(x)/x`, continued with 1 at the origin.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if abs(x) < 1e-9 {
        // below this the quadratic correction is under 1e-18 and sin(x)/x
        // would only add rounding noise
        1.0
    } else {
        sin(x) / x
    }
}

/// Modulus of a complex number given as (re, im).
///
/// Plain `sqrt(re² + im²)`; the quantities in this crate are nowhere near
/// the overflow range that would call for `hypot`.
#[inline]
pub fn cmod(re: f64, im: f64) -> f64 {
    sqrt(re * re + im * im)
}

/// SplitMix64 sequence member `index` for a base seed.
///
/// Used to derive independent per-restart RNG seeds from one user-facing
/// seed; the constants are the standard SplitMix64 increment and mixing
/// multipliers.
#[inline]
pub fn splitmix64(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Strictly-positive check that treats NaN as not positive, for input
/// validation at module boundaries.
#[inline]
#[must_use]
pub fn is_positive(x: f64) -> bool {
    matches!(x.partial_cmp(&0.0), Some(core::cmp::Ordering::Greater))
}
