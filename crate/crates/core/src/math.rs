//! Floating-point helpers that `core` does not provide.
//!
//! Transcendentals come from `libm`; the summation helpers fix the
//! reduction order so results do not depend on how callers chunk work.

pub use libm::{atan2, cbrt, cos, erf, exp, fabs, floor, lgamma, log, log10, log2, pow, sin, sqrt};

/// Pairwise (cascade) summation with a fixed split order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = 0.0;
        for &v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Arithmetic mean using [`pairwise_sum`]; `0.0` for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    pairwise_sum(values) / values.len() as f64
}

/// Round half away from zero.
#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

/// Round half up, the quantizer used at every 8-bit boundary.
#[inline]
pub fn quantize_u8(v: f64) -> u8 {
    let q = floor(v * 255.0 + 0.5);
    if q <= 0.0 {
        0
    } else if q >= 255.0 {
        255
    } else {
        q as u8
    }
}
