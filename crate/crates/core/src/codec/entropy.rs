//! Huffman coding of quantized 8×8 blocks: DC differences and AC run/size
//! symbols followed by magnitude bits, MSB first. No marker stuffing: the
//! payload lives inside a length-prefixed container section.

use alloc::vec::Vec;

use super::tables::{HuffmanSpec, ZIGZAG};
use crate::error::{Error, Result};

pub struct BitWriter {
    out: Vec<u8>,
    acc: u32,
    nbits: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        Self {
            out: Vec::new(),
            acc: 0,
            nbits: 0,
        }
    }

    pub fn put(&mut self, code: u32, len: u32) {
        debug_assert!(len <= 24);
        if len == 0 {
            return;
        }
        self.acc = (self.acc << len) | (code & ((1 << len) - 1));
        self.nbits += len;
        while self.nbits >= 8 {
            self.nbits -= 8;
            self.out.push((self.acc >> self.nbits) as u8);
        }
        self.acc &= (1 << self.nbits) - 1;
    }

    /// Pads the last byte with one bits.
    pub fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            let pad = 8 - self.nbits;
            self.put((1 << pad) - 1, pad);
        }
        self.out
    }
}

pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    bit: u32,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self {
            data,
            pos: 0,
            bit: 0,
        }
    }

    pub fn offset(&self) -> usize {
        self.pos
    }

    fn truncated(&self) -> Error {
        Error::Decode {
            offset: self.pos,
            reason: "payload truncated",
        }
    }

    pub fn bit(&mut self) -> Result<u32> {
        let byte = *self.data.get(self.pos).ok_or_else(|| self.truncated())?;
        let b = (byte >> (7 - self.bit)) & 1;
        self.bit += 1;
        if self.bit == 8 {
            self.bit = 0;
            self.pos += 1;
        }
        Ok(b as u32)
    }

    pub fn bits(&mut self, n: u32) -> Result<u32> {
        let mut v = 0;
        for _ in 0..n {
            v = (v << 1) | self.bit()?;
        }
        Ok(v)
    }
}

/// Canonical codes for one table, indexed by symbol.
pub struct HuffmanEncoder {
    codes: [(u16, u8); 256],
}

/// Decoding state for one table (T.81 Annex F.2.2.3).
pub struct HuffmanDecoder {
    max_code: [i32; 17],
    val_offset: [i32; 17],
    values: &'static [u8],
}

fn canonical_codes(spec: &HuffmanSpec) -> Vec<(u16, u8)> {
    let mut out = Vec::with_capacity(spec.values.len());
    let mut code: u16 = 0;
    for (len_idx, &count) in spec.bits.iter().enumerate() {
        for _ in 0..count {
            out.push((code, (len_idx + 1) as u8));
            code += 1;
        }
        code <<= 1;
    }
    out
}

impl HuffmanEncoder {
    pub fn new(spec: &HuffmanSpec) -> Self {
        let mut codes = [(0u16, 0u8); 256];
        for (&sym, code) in spec.values.iter().zip(canonical_codes(spec)) {
            codes[sym as usize] = code;
        }
        Self { codes }
    }

    fn emit(&self, w: &mut BitWriter, symbol: u8) {
        let (code, len) = self.codes[symbol as usize];
        debug_assert!(len > 0, "symbol {symbol:#x} has no code");
        w.put(code as u32, len as u32);
    }
}

impl HuffmanDecoder {
    pub fn new(spec: &'static HuffmanSpec) -> Self {
        let mut max_code = [-1i32; 17];
        let mut val_offset = [0i32; 17];
        let mut code = 0i32;
        let mut k = 0i32;
        for len in 1..=16 {
            let count = spec.bits[len - 1] as i32;
            if count > 0 {
                val_offset[len] = k - code;
                code += count;
                k += count;
                max_code[len] = code - 1;
            }
            code <<= 1;
        }
        Self {
            max_code,
            val_offset,
            values: spec.values,
        }
    }

    fn decode(&self, r: &mut BitReader<'_>) -> Result<u8> {
        let mut code = 0i32;
        for len in 1..=16 {
            code = (code << 1) | r.bit()? as i32;
            if code <= self.max_code[len] {
                return Ok(self.values[(code + self.val_offset[len]) as usize]);
            }
        }
        Err(Error::Decode {
            offset: r.offset(),
            reason: "invalid Huffman code",
        })
    }
}

#[inline]
fn magnitude_category(v: i32) -> u32 {
    32 - v.unsigned_abs().leading_zeros()
}

#[inline]
fn magnitude_bits(v: i32, size: u32) -> u32 {
    if v < 0 {
        (v - 1) as u32 & ((1 << size) - 1)
    } else {
        v as u32
    }
}

#[inline]
fn extend(bits: u32, size: u32) -> i32 {
    if size == 0 {
        return 0;
    }
    if bits < (1 << (size - 1)) {
        bits as i32 - (1 << size) + 1
    } else {
        bits as i32
    }
}

/// Largest AC magnitude the default tables can carry (category 10).
pub const AC_LIMIT: i32 = 1023;
/// Largest DC difference magnitude (category 11).
pub const DC_DIFF_LIMIT: i32 = 2047;

pub struct BlockEncoder<'a> {
    pub dc: &'a HuffmanEncoder,
    pub ac: &'a HuffmanEncoder,
}

impl BlockEncoder<'_> {
    /// Encodes a block of quantized coefficients in natural order.
    pub fn encode(&self, w: &mut BitWriter, block: &[i32; 64], prev_dc: &mut i32) {
        let diff = (block[0] - *prev_dc).clamp(-DC_DIFF_LIMIT, DC_DIFF_LIMIT);
        *prev_dc += diff;
        let size = magnitude_category(diff);
        self.dc.emit(w, size as u8);
        w.put(magnitude_bits(diff, size), size);

        let mut run = 0u32;
        for &idx in &ZIGZAG[1..] {
            let v = block[idx].clamp(-AC_LIMIT, AC_LIMIT);
            if v == 0 {
                run += 1;
                continue;
            }
            while run >= 16 {
                self.ac.emit(w, 0xF0);
                run -= 16;
            }
            let size = magnitude_category(v);
            self.ac.emit(w, ((run << 4) | size) as u8);
            w.put(magnitude_bits(v, size), size);
            run = 0;
        }
        if run > 0 {
            self.ac.emit(w, 0x00);
        }
    }
}

pub struct BlockDecoder<'a> {
    pub dc: &'a HuffmanDecoder,
    pub ac: &'a HuffmanDecoder,
}

impl BlockDecoder<'_> {
    pub fn decode(&self, r: &mut BitReader<'_>, prev_dc: &mut i32) -> Result<[i32; 64]> {
        let mut block = [0i32; 64];
        let size = self.dc.decode(r)? as u32;
        if size > 11 {
            return Err(Error::Decode {
                offset: r.offset(),
                reason: "DC magnitude category out of range",
            });
        }
        let diff = extend(r.bits(size)?, size);
        *prev_dc += diff;
        block[0] = *prev_dc;

        let mut k = 1usize;
        while k < 64 {
            let rs = self.ac.decode(r)?;
            let run = (rs >> 4) as usize;
            let size = (rs & 0x0F) as u32;
            if size == 0 {
                if run == 15 {
                    k += 16;
                    continue;
                }
                break;
            }
            k += run;
            if k > 63 {
                return Err(Error::Decode {
                    offset: r.offset(),
                    reason: "AC run past end of block",
                });
            }
            block[ZIGZAG[k]] = extend(r.bits(size)?, size);
            k += 1;
        }
        if k > 64 {
            return Err(Error::Decode {
                offset: r.offset(),
                reason: "zero run past end of block",
            });
        }
        Ok(block)
    }
}
