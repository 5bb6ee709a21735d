//! 8×8 DCT, quantization and MCU-interleaved plane coding.

use alloc::vec;
use alloc::vec::Vec;

use super::entropy::{BitReader, BitWriter, BlockDecoder, BlockEncoder, HuffmanDecoder, HuffmanEncoder};
use super::tables::{AC_CHROMA, AC_LUMA, DC_CHROMA, DC_LUMA};
use crate::error::Result;
use crate::math::{cos, round, sqrt};

/// Which default Huffman tables a component uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableClass {
    Luma,
    Chroma,
}

/// One component: samples on the 0–255 scale plus its quantization table.
pub struct Component<'a> {
    pub samples: &'a [f64],
    pub quant: &'a [u8; 64],
    pub class: TableClass,
}

pub struct DctBasis {
    // basis[u][x] = C(u)/2 · cos((2x + 1)uπ/16)
    basis: [[f64; 8]; 8],
}

impl DctBasis {
    pub fn new() -> Self {
        let mut basis = [[0.0; 8]; 8];
        for (u, row) in basis.iter_mut().enumerate() {
            let cu = if u == 0 { 1.0 / sqrt(2.0) } else { 1.0 };
            for (x, v) in row.iter_mut().enumerate() {
                *v = 0.5 * cu * cos((2 * x + 1) as f64 * u as f64 * core::f64::consts::PI / 16.0);
            }
        }
        Self { basis }
    }

    pub fn forward(&self, block: &[f64; 64]) -> [f64; 64] {
        let mut tmp = [0.0; 64];
        for y in 0..8 {
            for u in 0..8 {
                let mut acc = 0.0;
                for x in 0..8 {
                    acc += self.basis[u][x] * block[y * 8 + x];
                }
                tmp[y * 8 + u] = acc;
            }
        }
        let mut out = [0.0; 64];
        for v in 0..8 {
            for u in 0..8 {
                let mut acc = 0.0;
                for y in 0..8 {
                    acc += self.basis[v][y] * tmp[y * 8 + u];
                }
                out[v * 8 + u] = acc;
            }
        }
        out
    }

    pub fn inverse(&self, coeffs: &[f64; 64]) -> [f64; 64] {
        let mut tmp = [0.0; 64];
        for v in 0..8 {
            for x in 0..8 {
                let mut acc = 0.0;
                for u in 0..8 {
                    acc += self.basis[u][x] * coeffs[v * 8 + u];
                }
                tmp[v * 8 + x] = acc;
            }
        }
        let mut out = [0.0; 64];
        for y in 0..8 {
            for x in 0..8 {
                let mut acc = 0.0;
                for v in 0..8 {
                    acc += self.basis[v][y] * tmp[v * 8 + x];
                }
                out[y * 8 + x] = acc;
            }
        }
        out
    }
}

fn tables(class: TableClass) -> (HuffmanEncoder, HuffmanEncoder) {
    match class {
        TableClass::Luma => (HuffmanEncoder::new(&DC_LUMA), HuffmanEncoder::new(&AC_LUMA)),
        TableClass::Chroma => (HuffmanEncoder::new(&DC_CHROMA), HuffmanEncoder::new(&AC_CHROMA)),
    }
}

fn decoders(class: TableClass) -> (HuffmanDecoder, HuffmanDecoder) {
    match class {
        TableClass::Luma => (HuffmanDecoder::new(&DC_LUMA), HuffmanDecoder::new(&AC_LUMA)),
        TableClass::Chroma => (HuffmanDecoder::new(&DC_CHROMA), HuffmanDecoder::new(&AC_CHROMA)),
    }
}

#[inline]
pub fn padded(n: usize) -> usize {
    n.div_ceil(8) * 8
}

// Fetch with edge replication outside the image.
#[inline]
fn sample(samples: &[f64], width: usize, height: usize, x: usize, y: usize) -> f64 {
    samples[y.min(height - 1) * width + x.min(width - 1)]
}

/// Encodes components of a `width × height` image, one block of each per MCU.
pub fn encode_components(width: usize, height: usize, components: &[Component<'_>]) -> Vec<u8> {
    let dct = DctBasis::new();
    let coders: Vec<_> = components.iter().map(|c| tables(c.class)).collect();
    let mut w = BitWriter::new();
    let mut prev_dc = vec![0i32; components.len()];
    let (bw, bh) = (padded(width) / 8, padded(height) / 8);
    for by in 0..bh {
        for bx in 0..bw {
            for (ci, comp) in components.iter().enumerate() {
                let mut block = [0.0; 64];
                for y in 0..8 {
                    for x in 0..8 {
                        block[y * 8 + x] =
                            sample(comp.samples, width, height, bx * 8 + x, by * 8 + y) - 128.0;
                    }
                }
                let coeffs = dct.forward(&block);
                let mut quantized = [0i32; 64];
                for i in 0..64 {
                    quantized[i] = round(coeffs[i] / comp.quant[i] as f64) as i32;
                }
                let (dc, ac) = &coders[ci];
                BlockEncoder { dc, ac }.encode(&mut w, &quantized, &mut prev_dc[ci]);
            }
        }
    }
    w.finish()
}

/// Inverse of [`encode_components`]; returns samples on the 0–255 scale,
/// unclamped, cropped to `width × height`.
pub fn decode_components(
    width: usize,
    height: usize,
    payload: &[u8],
    specs: &[(&[u8; 64], TableClass)],
) -> Result<Vec<Vec<f64>>> {
    let dct = DctBasis::new();
    let coders: Vec<_> = specs.iter().map(|(_, class)| decoders(*class)).collect();
    let mut r = BitReader::new(payload);
    let mut prev_dc = vec![0i32; specs.len()];
    let mut planes = vec![vec![0.0; width * height]; specs.len()];
    let (bw, bh) = (padded(width) / 8, padded(height) / 8);
    for by in 0..bh {
        for bx in 0..bw {
            for (ci, (quant, _)) in specs.iter().enumerate() {
                let (dc, ac) = &coders[ci];
                let q = BlockDecoder { dc, ac }.decode(&mut r, &mut prev_dc[ci])?;
                let mut coeffs = [0.0; 64];
                for i in 0..64 {
                    coeffs[i] = q[i] as f64 * quant[i] as f64;
                }
                let block = dct.inverse(&coeffs);
                for y in 0..8 {
                    let py = by * 8 + y;
                    if py >= height {
                        break;
                    }
                    for x in 0..8 {
                        let px = bx * 8 + x;
                        if px >= width {
                            break;
                        }
                        planes[ci][py * width + px] = block[y * 8 + x] + 128.0;
                    }
                }
            }
        }
    }
    Ok(planes)
}
