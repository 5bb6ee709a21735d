//! Objective evaluation of tone-mapped and decoded LDR images.
//!
//! - [`delta_c`]: mean Euclidean distance between the maximally saturated
//!   colors of LDR and HDR pixels.
//! - [`delta_h_mean`] / [`delta_h`]: mean CIEDE2000 hue term.
//! - [`tmqi`]: Tone Mapped image Quality Index.
//! - [`psnr`]: peak signal-to-noise ratio for codec checks.
//!
//! Image-level means use [`crate::math::pairwise_sum`], so results do not
//! depend on evaluation order.

mod ciede2000;
mod lab;
pub mod tmqi;

use alloc::vec::Vec;

pub use ciede2000::{ciede2000, ciede2000_hue, ciede2000_terms, Ciede2000Terms};
pub use lab::{srgb_to_lab, srgb_to_linear, Lab};
pub use tmqi::{tmqi, TmqiScore};

use crate::error::Result;
use crate::hueplane::{compensate_image, max_sat_color, MaxSatColor};
use crate::image::{ensure_same_dims, HdrImage, LdrImage, Rgb, ScalarField};
use crate::math::{log10, mean, sqrt};

/// `‖c_H − c‖₂` for one pixel pair; zero when either side is gray.
pub fn max_sat_distance(ldr_pixel: Rgb, hdr_pixel: Rgb) -> f64 {
    match (max_sat_color(ldr_pixel), max_sat_color(hdr_pixel)) {
        (MaxSatColor::Chromatic(c), MaxSatColor::Chromatic(ch)) => {
            let d = [ch[0] - c[0], ch[1] - c[1], ch[2] - c[2]];
            sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
        }
        _ => 0.0,
    }
}

/// Per-pixel [`max_sat_distance`] map.
pub fn delta_c_map(ldr: &LdrImage, hdr: &HdrImage) -> Result<ScalarField> {
    ensure_same_dims(hdr.dims(), ldr.dims())?;
    let values = ldr
        .pixels()
        .iter()
        .zip(hdr.pixels())
        .map(|(&l, &h)| max_sat_distance(l, h))
        .collect();
    ScalarField::new(ldr.width(), ldr.height(), values)
}

/// Δc: mean of [`max_sat_distance`] over all pixels.
pub fn delta_c(ldr: &LdrImage, hdr: &HdrImage) -> Result<f64> {
    Ok(mean(delta_c_map(ldr, hdr)?.values()))
}

/// Mean CIEDE2000 hue term between two display-referred sRGB images.
pub fn delta_h_mean(a: &LdrImage, b: &LdrImage) -> Result<f64> {
    ensure_same_dims(a.dims(), b.dims())?;
    let terms: Vec<f64> = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&p, &q)| ciede2000_hue(srgb_to_lab(p), srgb_to_lab(q)))
        .collect();
    Ok(mean(&terms))
}

/// The hue reference for an LDR image: each pixel keeps its own
/// white/black/chroma weights but takes the HDR pixel's hue.
pub fn hue_reference(ldr: &LdrImage, hdr: &HdrImage) -> Result<LdrImage> {
    compensate_image(ldr, hdr)
}

/// ΔH of an LDR image against an HDR original, via [`hue_reference`].
pub fn delta_h(ldr: &LdrImage, hdr: &HdrImage) -> Result<f64> {
    let reference = hue_reference(ldr, hdr)?;
    delta_h_mean(ldr, &reference)
}

/// `10·log10(1 / MSE)` over all channels; `+∞` for identical images.
pub fn psnr(a: &LdrImage, b: &LdrImage) -> Result<f64> {
    ensure_same_dims(a.dims(), b.dims())?;
    let sq: Vec<f64> = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .flat_map(|(p, q)| (0..3).map(move |c| (p[c] - q[c]) * (p[c] - q[c])))
        .collect();
    let mse = mean(&sq);
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * log10(1.0 / mse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use alloc::vec;

    #[test]
    fn delta_c_examples() {
        let ldr = LdrImage::new(1, 1, vec![[0.8, 0.5, 0.2]]).unwrap();
        let hdr = HdrImage::new(1, 1, vec![[3.0, 1.0, 1.0]]).unwrap();
        assert!((delta_c(&ldr, &hdr).unwrap() - 0.5).abs() < 1e-15);

        let same = HdrImage::new(1, 1, vec![[8.0, 5.0, 2.0]]).unwrap();
        assert!(delta_c(&ldr, &same).unwrap() < 1e-15);

        let gray = HdrImage::new(1, 1, vec![[2.0, 2.0, 2.0]]).unwrap();
        assert_eq!(delta_c(&ldr, &gray).unwrap(), 0.0);

        let wide = HdrImage::new(2, 1, vec![[0.0; 3]; 2]).unwrap();
        assert!(matches!(
            delta_c(&ldr, &wide),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn delta_h_examples() {
        let a = LdrImage::new(2, 1, vec![[0.7, 0.3, 0.2], [0.1, 0.4, 0.9]]).unwrap();
        assert_eq!(delta_h_mean(&a, &a).unwrap(), 0.0);

        let b = LdrImage::new(2, 1, vec![[0.7, 0.3, 0.2], [0.1, 0.5, 0.9]]).unwrap();
        let h1 = ciede2000_hue(srgb_to_lab([0.1, 0.4, 0.9]), srgb_to_lab([0.1, 0.5, 0.9]));
        assert!((delta_h_mean(&a, &b).unwrap() - h1 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn delta_h_is_zero_when_hues_agree() {
        let ldr = LdrImage::new(1, 1, vec![[0.8, 0.5, 0.2]]).unwrap();
        let hdr = HdrImage::new(1, 1, vec![[8.0, 5.0, 2.0]]).unwrap();
        assert!(delta_h(&ldr, &hdr).unwrap() < 1e-9);
        let off = HdrImage::new(1, 1, vec![[8.0, 1.0, 2.0]]).unwrap();
        assert!(delta_h(&ldr, &off).unwrap() > 1.0);
    }

    #[test]
    fn psnr_examples() {
        let a = LdrImage::new(2, 2, vec![[0.5; 3]; 4]).unwrap();
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        let b = LdrImage::new(2, 2, vec![[0.5 + 1.0 / 255.0; 3]; 4]).unwrap();
        let p = psnr(&a, &b).unwrap();
        assert!((p - 20.0 * log10(255.0)).abs() < 1e-9);
        assert!((p - 48.13).abs() < 0.01);
        assert_eq!(p, psnr(&b, &a).unwrap());
    }
}
