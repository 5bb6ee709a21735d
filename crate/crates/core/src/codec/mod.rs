//! Two-layer HDR coding.
//!
//! ```text
//! HDR ──TMO──▶ LDR ──[hue compensation]──▶ base encoder ──────────────▶ base layer
//!                                              │
//!                                         base decoder ──▶ inverse TMO ──▶ x̂
//! HDR ───────────────────────────────────────────────────── log2(x / x̂) ──▶ residual layer
//! ```
//!
//! The residual is taken against the *decoded* base layer, so base-layer
//! loss and any change made before base coding (such as hue compensation)
//! are absorbed by the residual. The inverse TMO itself is unmodified.

mod base;
mod blocks;
mod container;
mod entropy;
mod residual;
pub mod tables;

use alloc::vec::Vec;

pub use base::{decode_base, encode_base, BaseCodestream};
pub use container::{read_base_layer, residual_section_range, TwoLayerStream, MAGIC, VERSION};
pub use residual::{compute_residual, ResidualCodestream, ResidualPlanes, DEFAULT_EPSILON};

use crate::error::{Error, Result};
use crate::hueplane::compensate_image;
use crate::image::{HdrImage, LdrImage, Rgb};
use crate::math::pow;
use crate::tmo::{gamma_decode, luminance, ToneCurve, TmoParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncoderConfig {
    pub params: TmoParams,
    /// Base-layer quality factor in `[1, 100]`.
    pub quality: u8,
    /// Apply hue compensation before base coding.
    pub compensate: bool,
    pub residual_quality: u8,
    pub epsilon: f64,
}

impl EncoderConfig {
    pub fn new(params: TmoParams, quality: u8, compensate: bool) -> Self {
        Self {
            params,
            quality,
            compensate,
            residual_quality: 100,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

/// Inverts the tone curve on a gamma-encoded LDR image.
///
/// Channels are linearized, their luminance is mapped back through the
/// curve, and the recombination step is undone:
/// `x = L_w · (v / L_d)^(1/s)`.
pub fn inverse_tmo(ldr: &LdrImage, curve: &ToneCurve) -> Result<HdrImage> {
    let p = &curve.params;
    let pixels: Vec<Rgb> = ldr
        .pixels()
        .iter()
        .map(|&enc| {
            let lin = gamma_decode(enc, p.gamma);
            let l_d = luminance(lin);
            if l_d <= 0.0 {
                return [0.0; 3];
            }
            let l_w = curve.invert(l_d);
            let mut out = [0.0; 3];
            for c in 0..3 {
                let ratio = lin[c] / l_d;
                out[c] = if p.saturation == 1.0 {
                    l_w * ratio
                } else {
                    l_w * pow(ratio, 1.0 / p.saturation)
                };
            }
            out
        })
        .collect();
    HdrImage::new(ldr.width(), ldr.height(), pixels)
}

/// Everything the encoder produced, for callers that also want the
/// intermediate images.
#[derive(Debug, Clone)]
pub struct EncodeOutput {
    pub stream: TwoLayerStream,
    /// LDR image handed to the base encoder (compensated if requested).
    pub base_input: LdrImage,
    /// Decoded base layer, identical to what [`decode_ldr`] returns.
    pub base_decoded: LdrImage,
}

pub fn encode_with(hdr: &HdrImage, config: &EncoderConfig) -> Result<EncodeOutput> {
    base::validate_quality(config.quality)?;
    base::validate_quality(config.residual_quality)?;
    let curve = ToneCurve::fit(hdr, &config.params)?;
    let ldr = curve.apply(hdr);
    let base_input = if config.compensate {
        compensate_image(&ldr, hdr)?
    } else {
        ldr
    };
    let base = encode_base(&base_input, config.quality)?;
    let base_decoded = decode_base(&base)?;
    let estimate = inverse_tmo(&base_decoded, &curve)?;
    let residual = compute_residual(hdr, &estimate, config.epsilon)?.encode(config.residual_quality)?;
    let stream = TwoLayerStream {
        width: base.width,
        height: base.height,
        base,
        residual,
        curve,
        compensated: config.compensate,
    };
    Ok(EncodeOutput {
        stream,
        base_input,
        base_decoded,
    })
}

/// TMO → optional hue compensation → base layer → closed-loop residual.
pub fn encode(hdr: &HdrImage, params: &TmoParams, quality: u8, compensate: bool) -> Result<TwoLayerStream> {
    encode_with(hdr, &EncoderConfig::new(*params, quality, compensate)).map(|o| o.stream)
}

/// LDR from the base layer alone.
pub fn decode_ldr(stream: &TwoLayerStream) -> Result<LdrImage> {
    check_dims(stream)?;
    decode_base(&stream.base)
}

/// LDR straight from container bytes; reads the header and base section only.
pub fn decode_ldr_bytes(bytes: &[u8]) -> Result<LdrImage> {
    decode_base(&read_base_layer(bytes)?)
}

/// HDR from both layers.
pub fn decode_hdr(stream: &TwoLayerStream) -> Result<HdrImage> {
    let ldr = decode_ldr(stream)?;
    let estimate = inverse_tmo(&ldr, &stream.curve)?;
    let planes = stream.residual.decode()?;
    planes.apply(&estimate)
}

fn check_dims(stream: &TwoLayerStream) -> Result<()> {
    let header = (stream.width, stream.height);
    if (stream.base.width, stream.base.height) != header || (stream.residual.width, stream.residual.height) != header {
        return Err(Error::Container {
            offset: 6,
            reason: "layer dimensions disagree with header",
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tmo::Operator;

    fn scene() -> HdrImage {
        HdrImage::from_fn(40, 24, |x, y| {
            let e = pow(2.0, x as f64 * 0.3 - 5.0);
            [e * (1.0 + y as f64 * 0.1), e * 0.6, e * (2.5 - y as f64 * 0.08)]
        })
        .unwrap()
    }

    #[test]
    fn reinhard_inverse_example() {
        let ldr = LdrImage::new(1, 1, alloc::vec![[0.0; 3]]).unwrap();
        let hdr = HdrImage::new(1, 1, alloc::vec![[5.0; 3]]).unwrap();
        let curve = ToneCurve::fit(&hdr, &TmoParams::with_operator(Operator::ReinhardGlobal)).unwrap();
        assert_eq!(inverse_tmo(&ldr, &curve).unwrap().pixels()[0], [0.0; 3]);
    }

    #[test]
    fn container_round_trip_and_determinism() {
        let hdr = scene();
        for compensate in [false, true] {
            let a = encode(&hdr, &TmoParams::default(), 80, compensate).unwrap();
            let b = encode(&hdr, &TmoParams::default(), 80, compensate).unwrap();
            let bytes = a.to_bytes();
            assert_eq!(bytes, b.to_bytes());
            let parsed = TwoLayerStream::from_bytes(&bytes).unwrap();
            assert_eq!(parsed, a);
            assert_eq!(parsed.to_bytes(), bytes);
            assert_eq!(decode_ldr_bytes(&bytes).unwrap(), decode_ldr(&a).unwrap());
        }
    }

    #[test]
    fn container_rejects_corruption() {
        let bytes = encode(&scene(), &TmoParams::default(), 80, true).unwrap().to_bytes();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(
            TwoLayerStream::from_bytes(&bad),
            Err(Error::Container { offset: 0, .. })
        ));
        assert!(decode_ldr_bytes(&bad).is_err());
        for cut in [0, 3, 10, 20, bytes.len() - 1] {
            assert!(TwoLayerStream::from_bytes(&bytes[..cut]).is_err());
        }
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(TwoLayerStream::from_bytes(&extra).is_err());
        // header width disagrees with the base section
        let mut dims = bytes.clone();
        dims[6] ^= 1;
        assert!(decode_ldr_bytes(&dims).is_err());
        assert!(TwoLayerStream::from_bytes(&dims).is_err());
    }

    #[test]
    fn zero_residual_decodes_to_inverse_tmo() {
        let hdr = scene();
        let mut stream = encode(&hdr, &TmoParams::default(), 90, false).unwrap();
        let zero = ResidualPlanes {
            width: 40,
            height: 24,
            epsilon: DEFAULT_EPSILON,
            ranges: [[0.0, 0.0]; 3],
            constant: [true; 3],
            codes: [alloc::vec![0; 960], alloc::vec![0; 960], alloc::vec![0; 960]],
        };
        stream.residual = zero.encode(100).unwrap();
        let plain = inverse_tmo(&decode_ldr(&stream).unwrap(), &stream.curve).unwrap();
        let full = decode_hdr(&stream).unwrap();
        for (a, b) in full.pixels().iter().zip(plain.pixels()) {
            for c in 0..3 {
                assert!((a[c] - b[c]).abs() <= 1e-12 * b[c].max(1.0));
            }
        }
    }
}
