//! Portable Float Map (`PF`, three-channel) reader and writer.
//!
//! Rows are stored bottom-up. A negative scale marks little-endian data.
//! The writer always emits the canonical header `PF\n<w> <h>\n-1.0\n`.

use huecodec_core::HdrImage;

use super::{FormatError, Result, TokenReader};

pub fn read_pfm(bytes: &[u8]) -> Result<HdrImage> {
    let mut t = TokenReader::new(bytes);
    match t.token()? {
        "PF" => {}
        "Pf" => return Err(FormatError::Unsupported("grayscale PFM (Pf)".into())),
        other => return Err(FormatError::Format(format!("bad PFM magic {other:?}"))),
    }
    let width = t.dimension()?;
    let height = t.dimension()?;
    let scale_tok = t.token()?;
    let scale: f64 = scale_tok
        .parse()
        .map_err(|_| FormatError::Format(format!("bad PFM scale {scale_tok:?}")))?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(FormatError::Format("PFM scale must be finite and non-zero".into()));
    }
    t.end_header()?;
    let little_endian = scale < 0.0;

    let need = width * height * 12;
    let data = &bytes[t.pos..];
    if data.len() < need {
        return Err(FormatError::Truncated(format!(
            "PFM needs {need} data bytes, found {}",
            data.len()
        )));
    }
    let mut pixels = vec![[0.0; 3]; width * height];
    for (i, chunk) in data[..need].chunks_exact(4).enumerate() {
        let raw: [u8; 4] = chunk.try_into().unwrap();
        let v = if little_endian {
            f32::from_le_bytes(raw)
        } else {
            f32::from_be_bytes(raw)
        };
        if !v.is_finite() || v < 0.0 {
            return Err(FormatError::Data(format!("component {v} at sample {i}")));
        }
        let px = i / 3;
        let (file_row, x) = (px / width, px % width);
        let row = height - 1 - file_row;
        pixels[row * width + x][i % 3] = v as f64;
    }
    Ok(HdrImage::new(width, height, pixels)?)
}

pub fn write_pfm(img: &HdrImage) -> Vec<u8> {
    let (w, h) = img.dims();
    let mut out = format!("PF\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(w * h * 12);
    for row in (0..h).rev() {
        for x in 0..w {
            for v in img.pixel(x, row) {
                out.extend_from_slice(&(v as f32).to_le_bytes());
            }
        }
    }
    out
}
