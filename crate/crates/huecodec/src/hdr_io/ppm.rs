//! Binary PPM (`P6`, maxval 255).

use huecodec_core::LdrImage;

use super::{FormatError, Result, TokenReader};

/// Quantizes with `round(v · 255)` half-up.
pub fn write_ppm(img: &LdrImage) -> Vec<u8> {
    let (w, h) = img.dims();
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h * 3);
    for s in img.to_rgb8() {
        out.extend_from_slice(&s);
    }
    out
}

pub fn read_ppm(bytes: &[u8]) -> Result<LdrImage> {
    let mut t = TokenReader::new(bytes);
    let magic = t.token()?;
    if magic != "P6" {
        return Err(FormatError::Format(format!("bad PPM magic {magic:?}")));
    }
    let width = t.dimension()?;
    let height = t.dimension()?;
    let maxval = t.token()?;
    if maxval != "255" {
        return Err(FormatError::Unsupported(format!("PPM maxval {maxval}")));
    }
    t.end_header()?;
    let need = width * height * 3;
    let data = &bytes[t.pos..];
    if data.len() < need {
        return Err(FormatError::Truncated(format!(
            "PPM needs {need} data bytes, found {}",
            data.len()
        )));
    }
    let samples: Vec<[u8; 3]> = data[..need]
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    Ok(LdrImage::from_rgb8(width, height, &samples)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantization_examples() {
        let img = LdrImage::new(3, 1, vec![[1.0; 3], [0.5; 3], [0.0; 3]]).unwrap();
        let bytes = write_ppm(&img);
        assert!(bytes.starts_with(b"P6\n3 1\n255\n"));
        assert_eq!(&bytes[11..], &[255, 255, 255, 128, 128, 128, 0, 0, 0]);
    }

    #[test]
    fn quantizer_is_monotone_and_surjective() {
        let n = 4096;
        let img = LdrImage::from_fn(n, 1, |x, _| [x as f64 / (n - 1) as f64; 3]).unwrap();
        let bytes = write_ppm(&img);
        let data = &bytes[bytes.len() - 3 * n..];
        let reds: Vec<u8> = data.chunks(3).map(|c| c[0]).collect();
        assert!(reds.windows(2).all(|w| w[0] <= w[1]));
        let mut seen = [false; 256];
        for r in reds {
            seen[r as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn read_back() {
        let img = LdrImage::new(2, 1, vec![[0.2, 0.4, 0.6], [1.0, 0.0, 0.5]]).unwrap();
        let back = read_ppm(&write_ppm(&img)).unwrap();
        assert_eq!(back, img.quantized());
        assert!(matches!(read_ppm(b"P6\n2 2\n255\n\0"), Err(FormatError::Truncated(_))));
        assert!(matches!(read_ppm(b"P6\n1 1\n65535\n"), Err(FormatError::Unsupported(_))));
    }
}
