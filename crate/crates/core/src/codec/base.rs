//! Base layer: baseline-JPEG-style coding of an 8-bit LDR image in YCbCr
//! 4:4:4 with quality-scaled default tables.

use alloc::vec::Vec;

use super::blocks::{decode_components, encode_components, Component, TableClass};
use super::tables::{scaled_table, CHROMA_QUANT, LUMA_QUANT};
use crate::error::{Error, Result};
use crate::image::LdrImage;
use crate::math::quantize_u8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCodestream {
    pub width: u32,
    pub height: u32,
    pub quality: u8,
    /// Natural-order quantization tables actually used.
    pub luma_table: [u8; 64],
    pub chroma_table: [u8; 64],
    pub payload: Vec<u8>,
}

// JFIF full-range conversion.
#[inline]
fn rgb_to_ycbcr(r: f64, g: f64, b: f64) -> [f64; 3] {
    [
        0.299 * r + 0.587 * g + 0.114 * b,
        -0.168_735_892 * r - 0.331_264_108 * g + 0.5 * b + 128.0,
        0.5 * r - 0.418_687_589 * g - 0.081_312_411 * b + 128.0,
    ]
}

#[inline]
fn ycbcr_to_rgb(y: f64, cb: f64, cr: f64) -> [f64; 3] {
    let (cb, cr) = (cb - 128.0, cr - 128.0);
    [
        y + 1.402 * cr,
        y - 0.344_136_286 * cb - 0.714_136_286 * cr,
        y + 1.772 * cb,
    ]
}

pub fn validate_quality(quality: u8) -> Result<()> {
    if !(1..=100).contains(&quality) {
        return Err(Error::Parameter("quality must lie in [1, 100]"));
    }
    Ok(())
}

/// Quantizes `ldr` to 8 bits and codes it at quality `quality`.
pub fn encode_base(ldr: &LdrImage, quality: u8) -> Result<BaseCodestream> {
    validate_quality(quality)?;
    let (w, h) = ldr.dims();
    let width = u32::try_from(w).map_err(|_| Error::Parameter("image too wide"))?;
    let height = u32::try_from(h).map_err(|_| Error::Parameter("image too tall"))?;
    let n = w * h;
    let mut planes = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for s in ldr.to_rgb8() {
        let ycc = rgb_to_ycbcr(s[0] as f64, s[1] as f64, s[2] as f64);
        for c in 0..3 {
            planes[c].push(ycc[c]);
        }
    }
    let luma_table = scaled_table(&LUMA_QUANT, quality);
    let chroma_table = scaled_table(&CHROMA_QUANT, quality);
    let payload = encode_components(
        w,
        h,
        &[
            Component {
                samples: &planes[0],
                quant: &luma_table,
                class: TableClass::Luma,
            },
            Component {
                samples: &planes[1],
                quant: &chroma_table,
                class: TableClass::Chroma,
            },
            Component {
                samples: &planes[2],
                quant: &chroma_table,
                class: TableClass::Chroma,
            },
        ],
    );
    Ok(BaseCodestream {
        width,
        height,
        quality,
        luma_table,
        chroma_table,
        payload,
    })
}

/// Decodes to 8-bit samples, returned as an [`LdrImage`] of `v / 255`.
pub fn decode_base(stream: &BaseCodestream) -> Result<LdrImage> {
    let (w, h) = (stream.width as usize, stream.height as usize);
    if w == 0 || h == 0 {
        return Err(Error::Decode {
            offset: 0,
            reason: "zero image dimension",
        });
    }
    if stream.luma_table.contains(&0) || stream.chroma_table.contains(&0) {
        return Err(Error::Decode {
            offset: 0,
            reason: "zero quantization step",
        });
    }
    let planes = decode_components(
        w,
        h,
        &stream.payload,
        &[
            (&stream.luma_table, TableClass::Luma),
            (&stream.chroma_table, TableClass::Chroma),
            (&stream.chroma_table, TableClass::Chroma),
        ],
    )?;
    let samples: Vec<[u8; 3]> = (0..w * h)
        .map(|i| {
            let rgb = ycbcr_to_rgb(planes[0][i], planes[1][i], planes[2][i]);
            [
                quantize_u8(rgb[0] / 255.0),
                quantize_u8(rgb[1] / 255.0),
                quantize_u8(rgb[2] / 255.0),
            ]
        })
        .collect();
    LdrImage::from_rgb8(w, h, &samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn color_transform_inverts() {
        for &(r, g, b) in &[(0.0, 0.0, 0.0), (255.0, 255.0, 255.0), (200.0, 30.0, 90.0), (1.0, 254.0, 77.0)] {
            let ycc = rgb_to_ycbcr(r, g, b);
            let back = ycbcr_to_rgb(ycc[0], ycc[1], ycc[2]);
            assert!((back[0] - r).abs() < 1e-6 && (back[1] - g).abs() < 1e-6 && (back[2] - b).abs() < 1e-6);
        }
    }

    #[test]
    fn uniform_gray_is_exact_at_q100() {
        let img = LdrImage::new(16, 16, vec![[0.5; 3]; 256]).unwrap();
        let stream = encode_base(&img, 100).unwrap();
        assert_eq!(stream.luma_table, [1; 64]);
        let out = decode_base(&stream).unwrap();
        for (a, b) in out.pixels().iter().zip(img.pixels()) {
            for c in 0..3 {
                assert!((a[c] - b[c]).abs() <= 1.0 / 255.0);
            }
        }
    }

    #[test]
    fn deterministic_and_rejects_bad_quality() {
        let img = LdrImage::from_fn(20, 11, |x, y| [x as f64 / 20.0, y as f64 / 11.0, 0.3]).unwrap();
        assert_eq!(encode_base(&img, 80).unwrap(), encode_base(&img, 80).unwrap());
        assert!(matches!(encode_base(&img, 0), Err(Error::Parameter(_))));
        assert!(matches!(encode_base(&img, 101), Err(Error::Parameter(_))));
        let out = decode_base(&encode_base(&img, 80).unwrap()).unwrap();
        assert_eq!(out.dims(), (20, 11));
    }

    #[test]
    fn truncated_payload_errors() {
        let img = LdrImage::from_fn(32, 32, |x, y| [((x * y) % 7) as f64 / 7.0, 0.2, 0.9]).unwrap();
        let mut stream = encode_base(&img, 90).unwrap();
        let full = stream.payload.clone();
        for cut in [0, 1, full.len() / 3, full.len() - 1] {
            stream.payload = full[..cut].to_vec();
            assert!(matches!(decode_base(&stream), Err(Error::Decode { .. })));
        }
    }
}
