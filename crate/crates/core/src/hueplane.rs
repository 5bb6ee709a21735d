//! Constant-hue-plane algebra in the RGB cube.
//!
//! Every pixel `x` lies in the triangle spanned by white `w = (1,1,1)`,
//! black `k = (0,0,0)` and its maximally saturated color `c`, so
//!
//! ```text
//! x = a_w·w + a_k·k + a_c·c,   a_w + a_k + a_c = 1,   0 ≤ a_* ≤ 1
//! ```
//!
//! with `a_w = min(x)`, `a_c = max(x) − min(x)` and `a_k = 1 − max(x)`.
//! Black contributes nothing to the sum, so each channel is simply
//! `a_w + a_c·c_channel`. Hue compensation keeps `(a_w, a_k, a_c)` of an
//! LDR pixel and swaps its `c` for the one of the matching HDR pixel.
//!
//! The chromatic weight is `max − min` and the black weight `1 − max`. The
//! opposite assignment does not reproduce `x` when recomposed.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{ensure_same_dims, HdrImage, LdrImage, Rgb};

/// Pixels whose channel spread is below this fraction of their maximum are gray.
pub const ACHROMATIC_TOLERANCE: f64 = 1e-10;

/// Barycentric weights of a pixel on its constant hue plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HueCoords {
    /// `a_w`, weight of white.
    pub white: f64,
    /// `a_k`, weight of black.
    pub black: f64,
    /// `a_c`, weight of the maximally saturated color.
    pub chroma: f64,
}

/// The maximally saturated color with the same hue as a pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxSatColor {
    /// Largest component exactly 1, smallest exactly 0.
    Chromatic(Rgb),
    /// Gray pixel; no hue is defined.
    Achromatic,
}

impl MaxSatColor {
    pub fn is_chromatic(&self) -> bool {
        matches!(self, MaxSatColor::Chromatic(_))
    }

    pub fn color(&self) -> Option<Rgb> {
        match *self {
            MaxSatColor::Chromatic(c) => Some(c),
            MaxSatColor::Achromatic => None,
        }
    }
}

#[inline]
fn min_max(p: &Rgb) -> (f64, f64) {
    (p[0].min(p[1]).min(p[2]), p[0].max(p[1]).max(p[2]))
}

/// Decomposes an LDR pixel into its white/black/chroma weights.
pub fn hue_coords(pixel: Rgb) -> Result<HueCoords> {
    for &v in &pixel {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain {
                what: "LDR component",
                value: v,
            });
        }
    }
    let (lo, hi) = min_max(&pixel);
    Ok(HueCoords {
        white: lo,
        black: 1.0 - hi,
        chroma: hi - lo,
    })
}

/// `(x − min) / (max − min)` per channel, for LDR and HDR pixels alike.
///
/// Components must be finite and non-negative; HDR values above 1 are fine.
pub fn max_sat_color(pixel: Rgb) -> MaxSatColor {
    debug_assert!(pixel.iter().all(|v| v.is_finite() && *v >= 0.0));
    let (lo, hi) = min_max(&pixel);
    let spread = hi - lo;
    if spread == 0.0 || spread < ACHROMATIC_TOLERANCE * hi {
        return MaxSatColor::Achromatic;
    }
    MaxSatColor::Chromatic([
        (pixel[0] - lo) / spread,
        (pixel[1] - lo) / spread,
        (pixel[2] - lo) / spread,
    ])
}

/// Rebuilds a pixel from its weights and maximally saturated color.
pub fn recompose(coords: HueCoords, c: MaxSatColor) -> Result<Rgb> {
    match c {
        MaxSatColor::Chromatic(c) => Ok([
            coords.white + coords.chroma * c[0],
            coords.white + coords.chroma * c[1],
            coords.white + coords.chroma * c[2],
        ]),
        MaxSatColor::Achromatic if coords.chroma == 0.0 => {
            Ok([coords.white, coords.white, coords.white])
        }
        MaxSatColor::Achromatic => Err(Error::Inconsistent(
            "achromatic color with a non-zero chroma weight",
        )),
    }
}

/// Moves `ldr_pixel` onto the constant hue plane of `hdr_pixel`.
///
/// Gray LDR pixels have nothing to rotate, and gray HDR pixels offer no
/// target hue; both cases return the LDR pixel unchanged.
pub fn compensate_pixel(ldr_pixel: Rgb, hdr_pixel: Rgb) -> Result<Rgb> {
    let coords = hue_coords(ldr_pixel)?;
    if coords.chroma == 0.0 {
        return Ok(ldr_pixel);
    }
    match max_sat_color(hdr_pixel) {
        MaxSatColor::Achromatic => Ok(ldr_pixel),
        target @ MaxSatColor::Chromatic(_) => {
            let out = recompose(coords, target)?;
            Ok([out[0].min(1.0), out[1].min(1.0), out[2].min(1.0)])
        }
    }
}

/// Per-pixel [`compensate_pixel`] over a whole image.
pub fn compensate_image(ldr: &LdrImage, hdr: &HdrImage) -> Result<LdrImage> {
    ensure_same_dims(ldr.dims(), hdr.dims())?;
    let pixels = ldr
        .pixels()
        .iter()
        .zip(hdr.pixels())
        .map(|(&l, &h)| compensate_pixel(l, h))
        .collect::<Result<Vec<_>>>()?;
    LdrImage::new(ldr.width(), ldr.height(), pixels)
}
