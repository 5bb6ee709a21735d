//! Image containers shared by every stage of the pipeline.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::quantize_u8;

/// An RGB triple in `f64`.
pub type Rgb = [f64; 3];

/// Linear-light image with finite, non-negative components of arbitrary scale.
#[derive(Debug, Clone, PartialEq)]
pub struct HdrImage {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

/// Display-referred image with components in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LdrImage {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

/// Row-major grid of non-negative scalars (per-pixel error maps and the like).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Parameter("image dimensions must be positive"));
    }
    if width.checked_mul(height) != Some(len) {
        return Err(Error::Parameter("pixel count does not match width x height"));
    }
    Ok(())
}

impl HdrImage {
    pub fn new(width: usize, height: usize, pixels: Vec<Rgb>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        for p in &pixels {
            for &v in p {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Domain {
                        what: "HDR component",
                        value: v,
                    });
                }
            }
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image from a per-pixel closure `f(x, y)`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> Rgb) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn into_pixels(self) -> Vec<Rgb> {
        self.pixels
    }
}

impl LdrImage {
    pub fn new(width: usize, height: usize, pixels: Vec<Rgb>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        for p in &pixels {
            for &v in p {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Domain {
                        what: "LDR component",
                        value: v,
                    });
                }
            }
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> Rgb) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    /// Decodes 8-bit samples, `v / 255`.
    pub fn from_rgb8(width: usize, height: usize, samples: &[[u8; 3]]) -> Result<Self> {
        let pixels = samples
            .iter()
            .map(|s| [s[0] as f64 / 255.0, s[1] as f64 / 255.0, s[2] as f64 / 255.0])
            .collect();
        Self::new(width, height, pixels)
    }

    /// The 24-bit form, quantized with `round(v * 255)` half-up.
    pub fn to_rgb8(&self) -> Vec<[u8; 3]> {
        self.pixels
            .iter()
            .map(|p| [quantize_u8(p[0]), quantize_u8(p[1]), quantize_u8(p[2])])
            .collect()
    }

    /// Round-trips through the 24-bit form.
    pub fn quantized(&self) -> LdrImage {
        let samples = self.to_rgb8();
        // quantized samples are always in range
        Self::from_rgb8(self.width, self.height, &samples).expect("8-bit samples are in range")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn into_pixels(self) -> Vec<Rgb> {
        self.pixels
    }
}

impl ScalarField {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_dims(width, height, values.len())?;
        if let Some(&v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Domain {
                what: "scalar field value",
                value: v,
            });
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub(crate) fn ensure_same_dims(expected: (usize, usize), found: (usize, usize)) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_bad_dimensions_and_values() {
        assert!(HdrImage::new(2, 2, vec![[0.0; 3]; 3]).is_err());
        assert!(HdrImage::new(0, 0, vec![]).is_err());
        assert!(HdrImage::new(1, 1, vec![[f64::NAN, 0.0, 0.0]]).is_err());
        assert!(HdrImage::new(1, 1, vec![[-1.0, 0.0, 0.0]]).is_err());
        assert!(HdrImage::new(1, 1, vec![[1e6, 0.0, 0.0]]).is_ok());
        assert!(LdrImage::new(1, 1, vec![[1.01, 0.0, 0.0]]).is_err());
        assert!(ScalarField::new(1, 1, vec![-0.1]).is_err());
    }

    #[test]
    fn rgb8_round_trip_is_stable() {
        let img = LdrImage::new(2, 1, vec![[0.5, 0.2, 1.0], [0.0, 0.999, 0.001]]).unwrap();
        let q = img.quantized();
        assert_eq!(q.to_rgb8(), img.to_rgb8());
        assert_eq!(q.quantized(), q);
        assert_eq!(img.to_rgb8()[0], [128, 51, 255]);
    }
}
