use crate::image::Rgb;
use crate::math::{cbrt, pow};

/// CIE 1976 L*a*b*, D65 white, 2° observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl Lab {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        Self { l, a, b }
    }
}

// sRGB primaries to XYZ under D65.
const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

const D65_WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];

/// Piecewise sRGB EOTF.
#[inline]
pub fn srgb_to_linear(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        pow((v + 0.055) / 1.055, 2.4)
    }
}

#[inline]
fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        cbrt(t)
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

pub fn srgb_to_lab(pixel: Rgb) -> Lab {
    let lin = [
        srgb_to_linear(pixel[0]),
        srgb_to_linear(pixel[1]),
        srgb_to_linear(pixel[2]),
    ];
    let mut xyz = [0.0; 3];
    for (row, out) in SRGB_TO_XYZ.iter().zip(xyz.iter_mut()) {
        *out = row[0] * lin[0] + row[1] * lin[1] + row[2] * lin[2];
    }
    let fx = lab_f(xyz[0] / D65_WHITE[0]);
    let fy = lab_f(xyz[1] / D65_WHITE[1]);
    let fz = lab_f(xyz[2] / D65_WHITE[2]);
    Lab {
        l: 116.0 * fy - 16.0,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_black_gray() {
        let w = srgb_to_lab([1.0, 1.0, 1.0]);
        assert!((w.l - 100.0).abs() < 1e-3);
        assert!(w.a.abs() < 0.01 && w.b.abs() < 0.01);

        let k = srgb_to_lab([0.0, 0.0, 0.0]);
        assert!(k.l.abs() < 1e-12 && k.a.abs() < 1e-12 && k.b.abs() < 1e-12);

        // Y = ((0.5 + 0.055) / 1.055)^2.4 = 0.214041..., L* = 116 Y^(1/3) - 16
        let g = srgb_to_lab([0.5, 0.5, 0.5]);
        assert!((g.l - 53.3890).abs() < 1e-3, "{}", g.l);
        assert!(g.a.abs() < 0.01 && g.b.abs() < 0.01);
    }

    #[test]
    fn primaries_have_expected_signs() {
        let r = srgb_to_lab([1.0, 0.0, 0.0]);
        assert!((r.l - 53.24).abs() < 0.01 && (r.a - 80.09).abs() < 0.02 && (r.b - 67.20).abs() < 0.02);
        let b = srgb_to_lab([0.0, 0.0, 1.0]);
        assert!(b.b < -100.0);
    }
}
