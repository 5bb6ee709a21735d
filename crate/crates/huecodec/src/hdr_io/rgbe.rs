//! Radiance RGBE reader.
//!
//! Accepts `#?RADIANCE` / `#?RGBE` files in `32-bit_rle_rgbe` format with
//! `-Y <h> +X <w>` orientation, with flat or new-style run-length scanlines.

use huecodec_core::HdrImage;

use super::{next_line, FormatError, Result};

/// `(m + 0.5) · 2^(e − 136)` per channel; `e = 0` is black.
pub fn decode_rgbe_pixel(rgbe: [u8; 4]) -> [f64; 3] {
    if rgbe[3] == 0 {
        return [0.0; 3];
    }
    let scale = 2f64.powi(rgbe[3] as i32 - 136);
    [
        (rgbe[0] as f64 + 0.5) * scale,
        (rgbe[1] as f64 + 0.5) * scale,
        (rgbe[2] as f64 + 0.5) * scale,
    ]
}

fn parse_resolution(line: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(FormatError::Format(format!("bad resolution line {line:?}")));
    }
    if parts[0] != "-Y" || parts[2] != "+X" {
        return Err(FormatError::Unsupported(format!(
            "orientation {} {} (only -Y +X is supported)",
            parts[0], parts[2]
        )));
    }
    let parse = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(FormatError::Format(format!("bad dimension {s:?}"))),
        }
    };
    Ok((parse(parts[3])?, parse(parts[1])?))
}

pub fn read_rgbe(bytes: &[u8]) -> Result<HdrImage> {
    let mut pos = 0;
    let signature = next_line(bytes, &mut pos).ok_or_else(|| FormatError::Format("empty file".into()))?;
    if signature != b"#?RADIANCE" && signature != b"#?RGBE" {
        return Err(FormatError::Format("missing #?RADIANCE or #?RGBE signature".into()));
    }
    loop {
        let line = next_line(bytes, &mut pos).ok_or_else(|| FormatError::Truncated("header not terminated".into()))?;
        if line.is_empty() {
            break;
        }
        if let Some(fmt) = line.strip_prefix(b"FORMAT=") {
            if fmt != b"32-bit_rle_rgbe" {
                return Err(FormatError::Unsupported(format!(
                    "pixel format {}",
                    String::from_utf8_lossy(fmt)
                )));
            }
        }
    }
    let res = next_line(bytes, &mut pos).ok_or_else(|| FormatError::Truncated("missing resolution line".into()))?;
    let res = std::str::from_utf8(res).map_err(|_| FormatError::Format("non-ASCII resolution line".into()))?;
    let (width, height) = parse_resolution(res)?;

    let mut data = &bytes[pos..];
    let mut pixels = Vec::with_capacity(width * height);
    let mut scanline = vec![[0u8; 4]; width];
    for row in 0..height {
        data = read_scanline(data, &mut scanline).map_err(|e| match e {
            FormatError::Truncated(msg) => FormatError::Truncated(format!("scanline {row}: {msg}")),
            other => other,
        })?;
        pixels.extend(scanline.iter().map(|&q| decode_rgbe_pixel(q)));
    }
    Ok(HdrImage::new(width, height, pixels)?)
}

fn read_scanline<'a>(data: &'a [u8], out: &mut [[u8; 4]]) -> Result<&'a [u8]> {
    let width = out.len();
    let is_rle = (8..0x8000).contains(&width)
        && data.len() >= 4
        && data[0] == 2
        && data[1] == 2
        && data[2] & 0x80 == 0;
    if !is_rle {
        let need = width * 4;
        if data.len() < need {
            return Err(FormatError::Truncated(format!("need {need} bytes, have {}", data.len())));
        }
        for (px, chunk) in out.iter_mut().zip(data[..need].chunks_exact(4)) {
            px.copy_from_slice(chunk);
        }
        return Ok(&data[need..]);
    }
    let declared = ((data[2] as usize) << 8) | data[3] as usize;
    if declared != width {
        return Err(FormatError::Truncated(format!(
            "run-length scanline declares width {declared}, expected {width}"
        )));
    }
    let mut pos = 4;
    for channel in 0..4 {
        let mut x = 0;
        while x < width {
            let count = *data.get(pos).ok_or_else(|| FormatError::Truncated("run header missing".into()))? as usize;
            pos += 1;
            if count > 128 {
                let run = count - 128;
                if x + run > width {
                    return Err(FormatError::Truncated("run overflows scanline".into()));
                }
                let v = *data.get(pos).ok_or_else(|| FormatError::Truncated("run value missing".into()))?;
                pos += 1;
                for px in &mut out[x..x + run] {
                    px[channel] = v;
                }
                x += run;
            } else {
                if count == 0 || x + count > width {
                    return Err(FormatError::Truncated("literal overflows scanline".into()));
                }
                let src = data
                    .get(pos..pos + count)
                    .ok_or_else(|| FormatError::Truncated("literal bytes missing".into()))?;
                for (px, &v) in out[x..x + count].iter_mut().zip(src) {
                    px[channel] = v;
                }
                pos += count;
                x += count;
            }
        }
    }
    Ok(&data[pos..])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(w: usize, h: usize) -> Vec<u8> {
        format!("#?RADIANCE\nFORMAT=32-bit_rle_rgbe\nEXPOSURE=1.0\n\n-Y {h} +X {w}\n").into_bytes()
    }

    #[test]
    fn decode_formula() {
        assert_eq!(decode_rgbe_pixel([128, 128, 128, 129]), [1.00390625; 3]);
        assert_eq!(decode_rgbe_pixel([0, 0, 0, 0]), [0.0; 3]);
        assert_eq!(decode_rgbe_pixel([200, 10, 3, 0]), [0.0; 3]);
    }

    #[test]
    fn monotone_in_exponent() {
        let mut prev = 0.0;
        for e in 1..=255u8 {
            let v = decode_rgbe_pixel([77, 77, 77, e])[0];
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn flat_scanlines() {
        let mut f = header(2, 1);
        f.extend_from_slice(&[128, 128, 128, 129, 0, 0, 0, 0]);
        let img = read_rgbe(&f).unwrap();
        assert_eq!(img.pixels(), &[[1.00390625; 3], [0.0; 3]]);
    }

    #[test]
    fn rle_scanline_with_runs_and_literals() {
        let w = 10;
        let mut f = header(w, 1);
        f.extend_from_slice(&[2, 2, 0, w as u8]);
        // R: run of 10 × 100
        f.extend_from_slice(&[128 + 10, 100]);
        // G: 3 literals then a run of 7 × 50
        f.extend_from_slice(&[3, 1, 2, 3, 128 + 7, 50]);
        // B: literal 10
        f.push(10);
        f.extend((0..10).map(|i| i as u8));
        // E: run of 10 × 130
        f.extend_from_slice(&[128 + 10, 130]);
        let img = read_rgbe(&f).unwrap();
        let expect = |m: u8| (m as f64 + 0.5) * 2f64.powi(130 - 136);
        assert_eq!(img.pixels()[0], [expect(100), expect(1), expect(0)]);
        assert_eq!(img.pixels()[9], [expect(100), expect(50), expect(9)]);
    }

    #[test]
    fn errors() {
        assert!(matches!(read_rgbe(b"P6\n"), Err(FormatError::Format(_))));
        let mut f = b"#?RADIANCE\n\n+Y 2 +X 2\n".to_vec();
        f.extend_from_slice(&[0; 16]);
        assert!(matches!(read_rgbe(&f), Err(FormatError::Unsupported(_))));
        let mut short = header(2, 2);
        short.extend_from_slice(&[1, 2, 3, 4]);
        assert!(matches!(read_rgbe(&short), Err(FormatError::Truncated(_))));
        let mut rle = header(8, 1);
        rle.extend_from_slice(&[2, 2, 0, 9]);
        assert!(matches!(read_rgbe(&rle), Err(FormatError::Truncated(_))));
        let xyz = b"#?RADIANCE\nFORMAT=32-bit_rle_xyze\n\n-Y 1 +X 1\n\0\0\0\0";
        assert!(matches!(read_rgbe(xyz), Err(FormatError::Unsupported(_))));
    }
}
