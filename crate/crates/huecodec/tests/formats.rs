use huecodec::core::{HdrImage, LdrImage};
use huecodec::hdr_io::{decode_rgbe_pixel, read_hdr_bytes, read_pfm, read_ppm, read_rgbe, write_pfm, write_ppm};
use proptest::prelude::*;

fn encode_rgbe_pixel(p: [f64; 3]) -> [u8; 4] {
    let v = p[0].max(p[1]).max(p[2]);
    if v < 1e-32 {
        return [0; 4];
    }
    let e = v.log2().floor() as i32 + 1;
    let scale = 256.0 / 2f64.powi(e);
    [
        (p[0] * scale).floor().min(255.0) as u8,
        (p[1] * scale).floor().min(255.0) as u8,
        (p[2] * scale).floor().min(255.0) as u8,
        (e + 128) as u8,
    ]
}

fn rle_channel(out: &mut Vec<u8>, data: &[u8]) {
    let mut i = 0;
    while i < data.len() {
        let mut run = 1;
        while i + run < data.len() && run < 127 && data[i + run] == data[i] {
            run += 1;
        }
        if run >= 3 {
            out.extend_from_slice(&[128 + run as u8, data[i]]);
            i += run;
        } else {
            let start = i;
            while i < data.len() && i - start < 128 {
                if i + 2 < data.len() && data[i] == data[i + 1] && data[i] == data[i + 2] {
                    break;
                }
                i += 1;
            }
            out.push((i - start) as u8);
            out.extend_from_slice(&data[start..i]);
        }
    }
}

fn write_rgbe(img: &HdrImage, rle: bool) -> Vec<u8> {
    let (w, h) = img.dims();
    let mut out = format!("#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y {h} +X {w}\n").into_bytes();
    for y in 0..h {
        let row: Vec<[u8; 4]> = (0..w).map(|x| encode_rgbe_pixel(img.pixel(x, y))).collect();
        if rle {
            out.extend_from_slice(&[2, 2, (w >> 8) as u8, (w & 0xff) as u8]);
            for c in 0..4 {
                let channel: Vec<u8> = row.iter().map(|p| p[c]).collect();
                rle_channel(&mut out, &channel);
            }
        } else {
            for p in row {
                out.extend_from_slice(&p);
            }
        }
    }
    out
}

fn hdr_image(max_side: usize) -> impl Strategy<Value = HdrImage> {
    (1..max_side, 1..max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(
            ([0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64], -20.0..20.0f64, any::<bool>()),
            w * h,
        )
        .prop_map(move |v| {
            // flat stretches exercise the run-length path
            let px = v
                .into_iter()
                .map(|(p, e, flat)| if flat { [0.5, 0.25, 0.125] } else { p.map(|c| c * 2f64.powf(e)) })
                .collect();
            HdrImage::new(w, h, px).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn pfm_round_trip_is_identity(img in hdr_image(12)) {
        let f32_img = HdrImage::new(img.width(), img.height(), img.pixels().iter().map(|p| p.map(|v| v as f32 as f64)).collect()).unwrap();
        let bytes = write_pfm(&f32_img);
        let back = read_pfm(&bytes).unwrap();
        prop_assert_eq!(&back, &f32_img);
        prop_assert_eq!(write_pfm(&back), bytes);
    }

    #[test]
    fn rgbe_round_trip_within_shared_exponent_error(img in hdr_image(40), rle in any::<bool>()) {
        let back = read_rgbe(&write_rgbe(&img, rle && img.width() >= 8)).unwrap();
        prop_assert_eq!(back.dims(), img.dims());
        for (a, b) in img.pixels().iter().zip(back.pixels()) {
            let m = a[0].max(a[1]).max(a[2]);
            if m < 1e-32 {
                continue;
            }
            for c in 0..3 {
                prop_assert!((a[c] - b[c]).abs() <= m * 2f64.powi(-7), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn rle_and_flat_scanlines_agree(img in hdr_image(40)) {
        prop_assume!(img.width() >= 8);
        prop_assert_eq!(read_rgbe(&write_rgbe(&img, true)).unwrap(), read_rgbe(&write_rgbe(&img, false)).unwrap());
    }

    #[test]
    fn ppm_round_trip_of_quantized_images(w in 1usize..16, h in 1usize..16, seed in any::<u64>()) {
        let img = LdrImage::from_fn(w, h, |x, y| {
            let v = (seed.wrapping_mul(31).wrapping_add((x * 7 + y * 13) as u64) % 256) as f64 / 255.0;
            [v, 1.0 - v, (v * 3.0) % 1.0]
        })
        .unwrap()
        .quantized();
        prop_assert_eq!(read_ppm(&write_ppm(&img)).unwrap(), img);
    }

    #[test]
    fn rgbe_decode_is_monotone_in_exponent(m in [any::<u8>(), any::<u8>(), any::<u8>()], e in 1u8..255) {
        let lo = decode_rgbe_pixel([m[0], m[1], m[2], e]);
        let hi = decode_rgbe_pixel([m[0], m[1], m[2], e + 1]);
        for c in 0..3 {
            prop_assert!(hi[c] > lo[c]);
        }
    }
}

#[test]
fn signature_sniffing() {
    let img = HdrImage::new(2, 1, vec![[1.0, 2.0, 3.0], [0.0; 3]]).unwrap();
    assert_eq!(read_hdr_bytes(&write_pfm(&img)).unwrap(), img);
    let rgbe = read_hdr_bytes(&write_rgbe(&img, false)).unwrap();
    assert_eq!(rgbe.dims(), (2, 1));
    assert!(read_hdr_bytes(b"GIF89a").is_err());
}
