//! `HXT1` two-layer container.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "HXT1"
//! 4       2     version (1)
//! 6       4     width
//! 10      4     height
//! 14      4     base section length B
//! 18      B     base section
//!         4     residual section length R
//!         R     residual section
//!         4     metadata section length M
//!         M     metadata section
//!
//! base section:      u32 width, u32 height, u8 quality,
//!                    64 B luma table, 64 B chroma table (natural order),
//!                    entropy-coded payload (rest of section)
//! residual section:  u32 width, u32 height, f64 epsilon,
//!                    3 × (f64 r_min, f64 r_max), u8 constant-channel bits,
//!                    u8 quality, 64 B table, payload (rest of section)
//! metadata section:  u8 operator id, u8 compensated flag,
//!                    f64 key, white, bias, saturation, gamma,
//!                    f64 log-average luminance, f64 max scaled luminance
//! ```
//!
//! The base layer is located from the fixed header alone, so LDR decoding
//! never touches residual bytes.

use alloc::vec::Vec;

use super::base::BaseCodestream;
use super::residual::ResidualCodestream;
use crate::error::{Error, Result};
use crate::tmo::{Operator, ToneCurve, TmoParams};

pub const MAGIC: &[u8; 4] = b"HXT1";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoLayerStream {
    pub width: u32,
    pub height: u32,
    pub base: BaseCodestream,
    pub residual: ResidualCodestream,
    /// Operator, parameters and image statistics needed to invert the TMO.
    pub curve: ToneCurve,
    pub compensated: bool,
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
    // offset of `data[0]` within the whole container, for error messages
    base_offset: usize,
}

impl<'a> Reader<'a> {
    fn new(data: &'a [u8], base_offset: usize) -> Self {
        Self {
            data,
            pos: 0,
            base_offset,
        }
    }

    fn err(&self, reason: &'static str) -> Error {
        Error::Container {
            offset: self.base_offset + self.pos,
            reason,
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.data.len() - self.pos < n {
            return Err(self.err("unexpected end of data"));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn table(&mut self) -> Result<[u8; 64]> {
        Ok(self.take(64)?.try_into().unwrap())
    }

    fn rest(&mut self) -> &'a [u8] {
        let s = &self.data[self.pos..];
        self.pos = self.data.len();
        s
    }

    /// A length-prefixed section, returned with its absolute start offset.
    fn section(&mut self) -> Result<(&'a [u8], usize)> {
        let len = self.u32()? as usize;
        let start = self.base_offset + self.pos;
        Ok((self.take(len)?, start))
    }
}

struct Header {
    width: u32,
    height: u32,
}

fn parse_header(r: &mut Reader<'_>) -> Result<Header> {
    if r.take(4)? != MAGIC {
        return Err(Error::Container {
            offset: 0,
            reason: "bad magic",
        });
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::Container {
            offset: 4,
            reason: "unsupported version",
        });
    }
    let width = r.u32()?;
    let height = r.u32()?;
    if width == 0 || height == 0 {
        return Err(Error::Container {
            offset: 6,
            reason: "zero image dimension",
        });
    }
    Ok(Header { width, height })
}

fn parse_base(section: &[u8], offset: usize, header: &Header) -> Result<BaseCodestream> {
    let mut r = Reader::new(section, offset);
    let width = r.u32()?;
    let height = r.u32()?;
    if (width, height) != (header.width, header.height) {
        return Err(r.err("base layer dimensions disagree with header"));
    }
    let quality = r.u8()?;
    if !(1..=100).contains(&quality) {
        return Err(r.err("base layer quality out of range"));
    }
    let luma_table = r.table()?;
    let chroma_table = r.table()?;
    let payload = r.rest().to_vec();
    Ok(BaseCodestream {
        width,
        height,
        quality,
        luma_table,
        chroma_table,
        payload,
    })
}

fn parse_residual(section: &[u8], offset: usize, header: &Header) -> Result<ResidualCodestream> {
    let mut r = Reader::new(section, offset);
    let width = r.u32()?;
    let height = r.u32()?;
    if (width, height) != (header.width, header.height) {
        return Err(r.err("residual layer dimensions disagree with header"));
    }
    let epsilon = r.f64()?;
    let mut ranges = [[0.0; 2]; 3];
    for range in &mut ranges {
        range[0] = r.f64()?;
        range[1] = r.f64()?;
    }
    let bits = r.u8()?;
    if bits & !0b111 != 0 {
        return Err(r.err("unknown residual flags"));
    }
    let constant = [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0];
    let quality = r.u8()?;
    let table = r.table()?;
    let payload = r.rest().to_vec();
    Ok(ResidualCodestream {
        width,
        height,
        epsilon,
        ranges,
        constant,
        quality,
        table,
        payload,
    })
}

fn parse_metadata(section: &[u8], offset: usize) -> Result<(ToneCurve, bool)> {
    let mut r = Reader::new(section, offset);
    let operator = Operator::from_id(r.u8()?).ok_or_else(|| r.err("unknown operator id"))?;
    let compensated = match r.u8()? {
        0 => false,
        1 => true,
        _ => return Err(r.err("invalid compensation flag")),
    };
    let params = TmoParams {
        operator,
        key: r.f64()?,
        white: r.f64()?,
        bias: r.f64()?,
        saturation: r.f64()?,
        gamma: r.f64()?,
    };
    let log_average = r.f64()?;
    let max_scaled = r.f64()?;
    let curve = ToneCurve::from_parts(params, log_average, max_scaled).map_err(|_| Error::Container {
        offset,
        reason: "invalid tone-mapping metadata",
    })?;
    Ok((curve, compensated))
}

/// Parses only the header and the base layer.
pub fn read_base_layer(bytes: &[u8]) -> Result<BaseCodestream> {
    let mut r = Reader::new(bytes, 0);
    let header = parse_header(&mut r)?;
    let (section, offset) = r.section()?;
    parse_base(section, offset, &header)
}

impl TwoLayerStream {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes, 0);
        let header = parse_header(&mut r)?;
        let (base, base_off) = r.section()?;
        let (residual, res_off) = r.section()?;
        let (meta, meta_off) = r.section()?;
        if r.pos != bytes.len() {
            return Err(r.err("trailing bytes after metadata"));
        }
        let base = parse_base(base, base_off, &header)?;
        let residual = parse_residual(residual, res_off, &header)?;
        let (curve, compensated) = parse_metadata(meta, meta_off)?;
        Ok(Self {
            width: header.width,
            height: header.height,
            base,
            residual,
            curve,
            compensated,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut base = Vec::with_capacity(self.base.payload.len() + 137);
        base.extend_from_slice(&self.base.width.to_le_bytes());
        base.extend_from_slice(&self.base.height.to_le_bytes());
        base.push(self.base.quality);
        base.extend_from_slice(&self.base.luma_table);
        base.extend_from_slice(&self.base.chroma_table);
        base.extend_from_slice(&self.base.payload);

        let res = &self.residual;
        let mut residual = Vec::with_capacity(res.payload.len() + 130);
        residual.extend_from_slice(&res.width.to_le_bytes());
        residual.extend_from_slice(&res.height.to_le_bytes());
        residual.extend_from_slice(&res.epsilon.to_le_bytes());
        for range in &res.ranges {
            residual.extend_from_slice(&range[0].to_le_bytes());
            residual.extend_from_slice(&range[1].to_le_bytes());
        }
        let bits = res
            .constant
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &c)| acc | ((c as u8) << i));
        residual.push(bits);
        residual.push(res.quality);
        residual.extend_from_slice(&res.table);
        residual.extend_from_slice(&res.payload);

        let p = &self.curve.params;
        let mut meta = Vec::with_capacity(58);
        meta.push(p.operator.id());
        meta.push(self.compensated as u8);
        for v in [
            p.key,
            p.white,
            p.bias,
            p.saturation,
            p.gamma,
            self.curve.log_average,
            self.curve.max_scaled,
        ] {
            meta.extend_from_slice(&v.to_le_bytes());
        }

        let mut out = Vec::with_capacity(HEADER_LEN + 12 + base.len() + residual.len() + meta.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        for section in [&base, &residual, &meta] {
            out.extend_from_slice(&(section.len() as u32).to_le_bytes());
            out.extend_from_slice(section);
        }
        out
    }
}

/// Byte range of the residual section's contents within a container.
pub fn residual_section_range(bytes: &[u8]) -> Result<core::ops::Range<usize>> {
    let mut r = Reader::new(bytes, 0);
    parse_header(&mut r)?;
    r.section()?;
    let (section, start) = r.section()?;
    Ok(start..start + section.len())
}
