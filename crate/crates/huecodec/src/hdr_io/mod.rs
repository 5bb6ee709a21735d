//! Image file formats: Radiance RGBE (read), PFM (read/write), binary PPM
//! (read/write) and false-color heatmaps.

mod heatmap;
mod pfm;
mod ppm;
mod rgbe;

use std::fs;
use std::path::Path;

pub use heatmap::{colormap_index, write_heatmap, COLORMAP, COLORMAP_VERSION};
pub use pfm::{read_pfm, write_pfm};
pub use ppm::{read_ppm, write_ppm};
pub use rgbe::{decode_rgbe_pixel, read_rgbe};

use huecodec_core::{HdrImage, LdrImage};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("format error: {0}")]
    Format(String),
    #[error("truncated data: {0}")]
    Truncated(String),
    #[error("unsupported feature: {0}")]
    Unsupported(String),
    #[error("invalid pixel data: {0}")]
    Data(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Image(#[from] huecodec_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

/// Reads an HDR image, choosing the parser from the file signature.
pub fn read_hdr_bytes(bytes: &[u8]) -> Result<HdrImage> {
    if bytes.starts_with(b"#?") {
        read_rgbe(bytes)
    } else if bytes.starts_with(b"PF") || bytes.starts_with(b"Pf") {
        read_pfm(bytes)
    } else {
        Err(FormatError::Format(
            "unrecognized HDR signature (expected #?RADIANCE, #?RGBE or PF)".into(),
        ))
    }
}

pub fn read_hdr_file(path: &Path) -> Result<HdrImage> {
    read_hdr_bytes(&fs::read(path)?)
}

/// Reads a display-referred image from PPM, or from PFM with every
/// component in `[0, 1]`.
pub fn read_ldr_bytes(bytes: &[u8]) -> Result<LdrImage> {
    if bytes.starts_with(b"P6") {
        read_ppm(bytes)
    } else if bytes.starts_with(b"PF") || bytes.starts_with(b"Pf") {
        let img = read_pfm(bytes)?;
        let (w, h) = img.dims();
        Ok(LdrImage::new(w, h, img.into_pixels())?)
    } else {
        Err(FormatError::Format("unrecognized LDR signature (expected P6 or PF)".into()))
    }
}

pub fn read_ldr_file(path: &Path) -> Result<LdrImage> {
    read_ldr_bytes(&fs::read(path)?)
}

/// Splits off one header line (without its `\n`) from `bytes[*pos..]`.
pub(crate) fn next_line<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    if *pos >= bytes.len() {
        return None;
    }
    let rest = &bytes[*pos..];
    let end = rest.iter().position(|&b| b == b'\n')?;
    *pos += end + 1;
    Some(&rest[..end])
}

/// Reads whitespace-separated ASCII header tokens (PNM style, `#` comments).
pub(crate) struct TokenReader<'a> {
    pub bytes: &'a [u8],
    pub pos: usize,
}

impl<'a> TokenReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn token(&mut self) -> Result<&'a str> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(FormatError::Truncated("header ended early".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| FormatError::Format("non-ASCII header token".into()))
    }

    /// Consumes the single whitespace byte that ends a binary header.
    pub fn end_header(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(FormatError::Truncated("missing header terminator".into())),
        }
    }

    pub fn dimension(&mut self) -> Result<usize> {
        let tok = self.token()?;
        let v: usize = tok
            .parse()
            .map_err(|_| FormatError::Format(format!("bad dimension {tok:?}")))?;
        if v == 0 {
            return Err(FormatError::Format("zero dimension".into()));
        }
        Ok(v)
    }
}
