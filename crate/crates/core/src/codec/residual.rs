//! Residual layer: per-channel log2 ratios between the HDR original and the
//! HDR estimate rebuilt from the decoded base layer.
//!
//! `r = log2((x_H + ε) / (x̂ + ε))` is mapped linearly from the image-global
//! `[r_min, r_max]` of each channel onto 8-bit codes, which are then coded
//! with the same block coder as the base layer (no color transform).

use alloc::vec::Vec;

use super::blocks::{decode_components, encode_components, Component, TableClass};
use super::tables::{scaled_table, LUMA_QUANT};
use crate::error::{Error, Result};
use crate::image::{ensure_same_dims, HdrImage, Rgb};
use crate::math::{floor, log2, pow};

pub const DEFAULT_EPSILON: f64 = 1.0 / 65536.0;

/// Quantized residual planes with everything needed to undo the mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualPlanes {
    pub width: usize,
    pub height: usize,
    pub epsilon: f64,
    /// `[r_min, r_max]` per channel.
    pub ranges: [[f64; 2]; 3],
    /// Channels whose ratio is the same everywhere; their codes are all zero.
    pub constant: [bool; 3],
    pub codes: [Vec<u8>; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualCodestream {
    pub width: u32,
    pub height: u32,
    pub epsilon: f64,
    pub ranges: [[f64; 2]; 3],
    pub constant: [bool; 3],
    pub quality: u8,
    pub table: [u8; 64],
    pub payload: Vec<u8>,
}

#[inline]
fn log_ratio(target: f64, estimate: f64, epsilon: f64) -> f64 {
    log2((target + epsilon) / (estimate + epsilon))
}

pub fn compute_residual(hdr: &HdrImage, base_reconstruction: &HdrImage, epsilon: f64) -> Result<ResidualPlanes> {
    ensure_same_dims(hdr.dims(), base_reconstruction.dims())?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Parameter("epsilon must be positive"));
    }
    let n = hdr.pixels().len();
    let mut ratios = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for (t, e) in hdr.pixels().iter().zip(base_reconstruction.pixels()) {
        for c in 0..3 {
            ratios[c].push(log_ratio(t[c], e[c], epsilon));
        }
    }
    let mut ranges = [[0.0; 2]; 3];
    let mut constant = [false; 3];
    let mut codes: [Vec<u8>; 3] = Default::default();
    for c in 0..3 {
        let lo = ratios[c].iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios[c].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ranges[c] = [lo, hi];
        if hi <= lo {
            constant[c] = true;
            codes[c] = alloc::vec![0; n];
            continue;
        }
        let span = hi - lo;
        codes[c] = ratios[c]
            .iter()
            .map(|&r| floor((r - lo) / span * 255.0 + 0.5).clamp(0.0, 255.0) as u8)
            .collect();
    }
    Ok(ResidualPlanes {
        width: hdr.width(),
        height: hdr.height(),
        epsilon,
        ranges,
        constant,
        codes,
    })
}

impl ResidualPlanes {
    /// Dequantized log2 ratio of channel `c` at pixel index `i`.
    #[inline]
    pub fn ratio(&self, c: usize, i: usize) -> f64 {
        let [lo, hi] = self.ranges[c];
        if self.constant[c] {
            return lo;
        }
        lo + self.codes[c][i] as f64 / 255.0 * (hi - lo)
    }

    /// `(x̂ + ε)·2^r − ε`, floored at zero.
    pub fn apply(&self, base_reconstruction: &HdrImage) -> Result<HdrImage> {
        ensure_same_dims((self.width, self.height), base_reconstruction.dims())?;
        let pixels: Vec<Rgb> = base_reconstruction
            .pixels()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let mut out = [0.0; 3];
                for c in 0..3 {
                    let v = (e[c] + self.epsilon) * pow(2.0, self.ratio(c, i)) - self.epsilon;
                    out[c] = if v.is_finite() { v.max(0.0) } else { 0.0 };
                }
                out
            })
            .collect();
        HdrImage::new(self.width, self.height, pixels)
    }

    pub fn encode(&self, quality: u8) -> Result<ResidualCodestream> {
        super::base::validate_quality(quality)?;
        let table = scaled_table(&LUMA_QUANT, quality);
        let samples: [Vec<f64>; 3] = core::array::from_fn(|c| self.codes[c].iter().map(|&v| v as f64).collect());
        let components: Vec<Component<'_>> = samples
            .iter()
            .map(|s| Component {
                samples: s,
                quant: &table,
                class: TableClass::Luma,
            })
            .collect();
        let payload = encode_components(self.width, self.height, &components);
        Ok(ResidualCodestream {
            width: self.width as u32,
            height: self.height as u32,
            epsilon: self.epsilon,
            ranges: self.ranges,
            constant: self.constant,
            quality,
            table,
            payload,
        })
    }
}

impl ResidualCodestream {
    pub fn decode(&self) -> Result<ResidualPlanes> {
        let (w, h) = (self.width as usize, self.height as usize);
        if w == 0 || h == 0 {
            return Err(Error::Decode {
                offset: 0,
                reason: "zero residual dimension",
            });
        }
        if self.table.contains(&0) {
            return Err(Error::Decode {
                offset: 0,
                reason: "zero quantization step",
            });
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Decode {
                offset: 0,
                reason: "residual epsilon must be positive",
            });
        }
        for c in 0..3 {
            let [lo, hi] = self.ranges[c];
            if !lo.is_finite() || !hi.is_finite() || (!self.constant[c] && lo >= hi) {
                return Err(Error::Decode {
                    offset: 0,
                    reason: "invalid residual range",
                });
            }
        }
        let planes = decode_components(
            w,
            h,
            &self.payload,
            &[
                (&self.table, TableClass::Luma),
                (&self.table, TableClass::Luma),
                (&self.table, TableClass::Luma),
            ],
        )?;
        let codes: [Vec<u8>; 3] = core::array::from_fn(|c| {
            if self.constant[c] {
                alloc::vec![0; w * h]
            } else {
                planes[c]
                    .iter()
                    .map(|&v| floor(v + 0.5).clamp(0.0, 255.0) as u8)
                    .collect()
            }
        });
        Ok(ResidualPlanes {
            width: w,
            height: h,
            epsilon: self.epsilon,
            ranges: self.ranges,
            constant: self.constant,
            codes,
        })
    }
}
