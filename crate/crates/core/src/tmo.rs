//! Global tone-mapping operators.
//!
//! Each operator compresses luminance, then recombines the compressed
//! luminance with the HDR pixel's color ratios, clamps, and gamma-encodes:
//!
//! ```text
//! L      = 0.2126 r + 0.7152 g + 0.0722 b
//! L_d    = curve(L)
//! v      = clamp(((x / L)^s) · L_d, 0, 1)
//! output = v^(1/gamma)
//! ```
//!
//! Global image statistics are computed once by [`ToneCurve::fit`], which
//! is also what the codec stores to invert the operator later.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{HdrImage, LdrImage, Rgb};
use crate::math::{exp, log, log10, mean, pow};

/// Floor added before taking the log of a luminance.
pub const LOG_AVERAGE_DELTA: f64 = 1e-6;

/// Rec. 709 luminance weights.
pub const LUMA_WEIGHTS: [f64; 3] = [0.2126, 0.7152, 0.0722];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    /// Reinhard global curve with the white point set to the brightest
    /// scaled luminance of the image; used as the codec's default.
    GlobalPhotographic,
    /// Reinhard global curve with a user-supplied white point.
    ReinhardGlobal,
    /// Drago adaptive logarithmic mapping.
    Drago,
}

impl Operator {
    pub const ALL: [Operator; 3] = [
        Operator::GlobalPhotographic,
        Operator::ReinhardGlobal,
        Operator::Drago,
    ];

    pub fn id(self) -> u8 {
        match self {
            Operator::GlobalPhotographic => 0,
            Operator::ReinhardGlobal => 1,
            Operator::Drago => 2,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(Operator::GlobalPhotographic),
            1 => Some(Operator::ReinhardGlobal),
            2 => Some(Operator::Drago),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Operator::GlobalPhotographic => "default",
            Operator::ReinhardGlobal => "reinhard",
            Operator::Drago => "drago",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmoParams {
    pub operator: Operator,
    /// Exposure key `a`.
    pub key: f64,
    /// Burn-out white point `L_white`; `f64::INFINITY` disables burn-out.
    /// Ignored by [`Operator::GlobalPhotographic`] and [`Operator::Drago`].
    pub white: f64,
    /// Drago bias `b` in `(0, 1]`.
    pub bias: f64,
    /// Color saturation exponent `s` in `(0, 1]`.
    pub saturation: f64,
    /// Display gamma.
    pub gamma: f64,
}

impl Default for TmoParams {
    fn default() -> Self {
        Self {
            operator: Operator::GlobalPhotographic,
            key: 0.18,
            white: f64::INFINITY,
            bias: 0.85,
            saturation: 1.0,
            gamma: 2.2,
        }
    }
}

impl TmoParams {
    pub fn with_operator(operator: Operator) -> Self {
        Self {
            operator,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.key.is_finite() && self.key > 0.0) {
            return Err(Error::Parameter("key must be positive and finite"));
        }
        if self.white.is_nan() || self.white <= 0.0 {
            return Err(Error::Parameter("white point must be positive"));
        }
        if !(self.bias > 0.0 && self.bias <= 1.0) {
            return Err(Error::Parameter("bias must lie in (0, 1]"));
        }
        if !(self.saturation > 0.0 && self.saturation <= 1.0) {
            return Err(Error::Parameter("saturation must lie in (0, 1]"));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::Parameter("gamma must be positive and finite"));
        }
        Ok(())
    }
}

#[inline]
pub fn luminance(p: Rgb) -> f64 {
    LUMA_WEIGHTS[0] * p[0] + LUMA_WEIGHTS[1] * p[1] + LUMA_WEIGHTS[2] * p[2]
}

/// `exp(mean(log(δ + L)))` over all pixels.
pub fn log_average_luminance(hdr: &HdrImage) -> f64 {
    let logs: Vec<f64> = hdr
        .pixels()
        .iter()
        .map(|&p| log(LOG_AVERAGE_DELTA + luminance(p)))
        .collect();
    exp(mean(&logs))
}

/// Reinhard's global curve `L (1 + L / W²) / (1 + L)`.
#[inline]
pub fn reinhard_curve(scaled: f64, white: f64) -> f64 {
    let burn = if white.is_infinite() {
        0.0
    } else {
        scaled / (white * white)
    };
    scaled * (1.0 + burn) / (1.0 + scaled)
}

/// Inverse of [`reinhard_curve`] for `display` in its range.
///
/// Solves `L²/W² + (1 − L_d) L − L_d = 0` with the cancellation-free root
/// `2 L_d / ((1 − L_d) + sqrt((1 − L_d)² + 4 L_d / W²))`.
#[inline]
pub fn reinhard_inverse(display: f64, white: f64) -> f64 {
    if display <= 0.0 {
        return 0.0;
    }
    let inv_w2 = if white.is_infinite() {
        0.0
    } else {
        1.0 / (white * white)
    };
    let one_minus = 1.0 - display;
    let disc = one_minus * one_minus + 4.0 * display * inv_w2;
    let denom = one_minus + crate::math::sqrt(disc);
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * display / denom
}

/// Drago's adaptive logarithmic curve with `L_dmax = 100`.
#[inline]
pub fn drago_curve(world: f64, world_max: f64, bias: f64) -> f64 {
    if world <= 0.0 || world_max <= 0.0 {
        return 0.0;
    }
    let exponent = log(bias) / log(0.5);
    let denom = log10(1.0 + world_max) * log(2.0 + 8.0 * pow(world / world_max, exponent));
    log(1.0 + world) / denom
}

/// Per-channel `((x / L_in)^s) · L_out`, clamped to `[0, 1]`.
pub fn recombine(hdr_pixel: Rgb, l_in: f64, l_out: f64, saturation: f64) -> Rgb {
    if l_in <= 0.0 {
        return [0.0; 3];
    }
    let mut out = [0.0; 3];
    for (o, &x) in out.iter_mut().zip(&hdr_pixel) {
        let ratio = x / l_in;
        let v = if saturation == 1.0 {
            ratio * l_out
        } else {
            pow(ratio, saturation) * l_out
        };
        *o = v.clamp(0.0, 1.0);
    }
    out
}

/// An operator bound to the statistics of one image.
///
/// `scaled = key · L / log_average`; the curve acts on the scaled value and
/// [`ToneCurve::invert`] returns world luminance again.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneCurve {
    pub params: TmoParams,
    pub log_average: f64,
    /// Largest scaled luminance in the fitted image.
    pub max_scaled: f64,
}

impl ToneCurve {
    pub fn fit(hdr: &HdrImage, params: &TmoParams) -> Result<Self> {
        params.validate()?;
        let log_average = log_average_luminance(hdr);
        let max_lum = hdr
            .pixels()
            .iter()
            .map(|&p| luminance(p))
            .fold(0.0, f64::max);
        Ok(Self {
            params: *params,
            log_average,
            max_scaled: params.key * max_lum / log_average,
        })
    }

    /// Builds a curve from stored statistics, as the decoder does.
    pub fn from_parts(params: TmoParams, log_average: f64, max_scaled: f64) -> Result<Self> {
        params.validate()?;
        if !(log_average.is_finite() && log_average > 0.0) {
            return Err(Error::Parameter("log-average luminance must be positive"));
        }
        if !(max_scaled.is_finite() && max_scaled >= 0.0) {
            return Err(Error::Parameter("maximum scaled luminance must be finite"));
        }
        Ok(Self {
            params,
            log_average,
            max_scaled,
        })
    }

    /// White point actually used by the Reinhard curve.
    pub fn white(&self) -> f64 {
        match self.params.operator {
            Operator::GlobalPhotographic => {
                if self.max_scaled > 0.0 {
                    self.max_scaled
                } else {
                    f64::INFINITY
                }
            }
            _ => self.params.white,
        }
    }

    #[inline]
    pub fn scale(&self, world: f64) -> f64 {
        self.params.key * world / self.log_average
    }

    /// Curve on scaled luminance, clamped to `[0, 1]`.
    pub fn map_scaled(&self, scaled: f64) -> f64 {
        let d = match self.params.operator {
            Operator::GlobalPhotographic | Operator::ReinhardGlobal => {
                reinhard_curve(scaled, self.white())
            }
            Operator::Drago => drago_curve(scaled, self.max_scaled, self.params.bias),
        };
        d.clamp(0.0, 1.0)
    }

    /// World luminance to display luminance.
    pub fn map(&self, world: f64) -> f64 {
        self.map_scaled(self.scale(world))
    }

    /// Display luminance back to scaled luminance, limited to `[0, max_scaled]`.
    pub fn invert_scaled(&self, display: f64) -> f64 {
        if display <= 0.0 || self.max_scaled <= 0.0 {
            return 0.0;
        }
        let top = self.map_scaled(self.max_scaled);
        if display >= top {
            return self.max_scaled;
        }
        match self.params.operator {
            Operator::GlobalPhotographic | Operator::ReinhardGlobal => {
                reinhard_inverse(display, self.white()).min(self.max_scaled)
            }
            Operator::Drago => self.bisect(display),
        }
    }

    /// Display luminance back to world luminance.
    pub fn invert(&self, display: f64) -> f64 {
        self.invert_scaled(display) * self.log_average / self.params.key
    }

    // Drago has no closed-form inverse; the curve is monotone on [0, max].
    fn bisect(&self, display: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.max_scaled);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.map_scaled(mid) < display {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Full forward mapping of one HDR pixel to a gamma-encoded LDR pixel.
    pub fn map_pixel(&self, p: Rgb) -> Rgb {
        let l_in = luminance(p);
        let l_out = self.map(l_in);
        let linear = recombine(p, l_in, l_out, self.params.saturation);
        gamma_encode(linear, self.params.gamma)
    }

    pub fn apply(&self, hdr: &HdrImage) -> LdrImage {
        let pixels = hdr.pixels().iter().map(|&p| self.map_pixel(p)).collect();
        LdrImage::new(hdr.width(), hdr.height(), pixels).expect("mapped pixels lie in [0, 1]")
    }
}

#[inline]
pub fn gamma_encode(linear: Rgb, gamma: f64) -> Rgb {
    let e = 1.0 / gamma;
    [
        pow(linear[0], e).clamp(0.0, 1.0),
        pow(linear[1], e).clamp(0.0, 1.0),
        pow(linear[2], e).clamp(0.0, 1.0),
    ]
}

#[inline]
pub fn gamma_decode(encoded: Rgb, gamma: f64) -> Rgb {
    [
        pow(encoded[0], gamma),
        pow(encoded[1], gamma),
        pow(encoded[2], gamma),
    ]
}

/// Tone-maps with whichever operator `params` names.
pub fn tone_map(hdr: &HdrImage, params: &TmoParams) -> Result<(LdrImage, ToneCurve)> {
    let curve = ToneCurve::fit(hdr, params)?;
    Ok((curve.apply(hdr), curve))
}

pub fn tmo_reinhard_global(hdr: &HdrImage, params: &TmoParams) -> Result<LdrImage> {
    let params = TmoParams {
        operator: Operator::ReinhardGlobal,
        ..*params
    };
    tone_map(hdr, &params).map(|(ldr, _)| ldr)
}

pub fn tmo_drago(hdr: &HdrImage, params: &TmoParams) -> Result<LdrImage> {
    let params = TmoParams {
        operator: Operator::Drago,
        ..*params
    };
    tone_map(hdr, &params).map(|(ldr, _)| ldr)
}

/// The codec's default operator: Reinhard global with `L_white = max(scaled L)`.
pub fn tmo_default(hdr: &HdrImage, params: &TmoParams) -> Result<LdrImage> {
    let params = TmoParams {
        operator: Operator::GlobalPhotographic,
        ..*params
    };
    tone_map(hdr, &params).map(|(ldr, _)| ldr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hueplane::max_sat_color;
    use alloc::vec;

    #[test]
    fn luminance_examples() {
        assert!((luminance([1.0, 1.0, 1.0]) - 1.0).abs() < 1e-15);
        assert_eq!(luminance([1.0, 0.0, 0.0]), 0.2126);
        assert_eq!(luminance([0.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn log_average_examples() {
        let uniform = HdrImage::new(4, 4, vec![[0.5; 3]; 16]).unwrap();
        assert!((log_average_luminance(&uniform) - 0.5).abs() < 1e-5);

        let two = HdrImage::new(2, 1, vec![[1.0; 3], [4.0; 3]]).unwrap();
        assert!((log_average_luminance(&two) - 2.0).abs() < 1e-5);

        let black = HdrImage::new(3, 1, vec![[0.0; 3]; 3]).unwrap();
        assert!((log_average_luminance(&black) - LOG_AVERAGE_DELTA).abs() < 1e-18);
    }

    #[test]
    fn reinhard_examples() {
        assert_eq!(reinhard_curve(1.0, f64::INFINITY), 0.5);
        assert_eq!(reinhard_curve(0.0, 2.0), 0.0);
        // burn-out maps the white point itself to exactly one
        assert!((reinhard_curve(3.0, 3.0) - 1.0).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 1..2000 {
            let l = i as f64 * 0.05;
            let d = reinhard_curve(l, f64::INFINITY);
            assert!(d > prev && d < 1.0);
            prev = d;
        }
        assert_eq!(reinhard_inverse(0.5, f64::INFINITY), 1.0);
        assert_eq!(reinhard_inverse(0.0, f64::INFINITY), 0.0);
        let w = 4.0;
        for i in 1..100 {
            let l = i as f64 * 0.04;
            let back = reinhard_inverse(reinhard_curve(l, w), w);
            assert!((back - l).abs() <= 1e-12 * l.max(1.0), "{l} -> {back}");
        }
    }

    #[test]
    fn drago_examples() {
        let max = 37.5;
        assert!((drago_curve(max, max, 0.85) - 1.0).abs() < 1e-14);
        assert_eq!(drago_curve(0.0, max, 0.85), 0.0);
        let mut prev = 0.0;
        for i in 1..=4000 {
            let lw = max * i as f64 / 4000.0;
            let d = drago_curve(lw, max, 0.85);
            assert!(d > prev, "not monotone at {lw}");
            prev = d;
        }
    }

    #[test]
    fn recombine_examples() {
        let p = [2.0, 1.0, 0.5];
        let l = luminance(p);
        let out = recombine(p, l, 0.3, 1.0);
        for c in 0..3 {
            assert!((out[c] - 0.3 * p[c] / l).abs() < 1e-15);
        }
        let q = [0.3, 0.6, 0.9];
        let lq = luminance(q);
        let id = recombine(q, lq, lq, 1.0);
        for c in 0..3 {
            assert!((id[c] - q[c]).abs() < 1e-15);
        }
        assert_eq!(recombine([2.0; 3], 2.0, 0.25, 0.6), [0.25; 3]);
        assert_eq!(recombine([0.0; 3], 0.0, 0.5, 1.0), [0.0; 3]);
    }

    #[test]
    fn params_validation() {
        assert!(TmoParams::default().validate().is_ok());
        let bad = [
            TmoParams {
                key: 0.0,
                ..TmoParams::default()
            },
            TmoParams {
                bias: 1.5,
                ..TmoParams::default()
            },
            TmoParams {
                saturation: 0.0,
                ..TmoParams::default()
            },
            TmoParams {
                gamma: -1.0,
                ..TmoParams::default()
            },
            TmoParams {
                white: f64::NAN,
                ..TmoParams::default()
            },
        ];
        for p in bad {
            assert!(matches!(p.validate(), Err(Error::Parameter(_))));
        }
    }

    fn test_image() -> HdrImage {
        HdrImage::from_fn(16, 8, |x, y| {
            let e = pow(2.0, (x as f64 - 8.0) * 0.9);
            [e * (0.3 + 0.05 * y as f64), e * 0.5, e * (0.9 - 0.1 * y as f64).max(0.01)]
        })
        .unwrap()
    }

    #[test]
    fn outputs_in_unit_cube_and_deterministic() {
        let hdr = test_image();
        for op in Operator::ALL {
            let params = TmoParams::with_operator(op);
            let (a, _) = tone_map(&hdr, &params).unwrap();
            let (b, _) = tone_map(&hdr, &params).unwrap();
            assert_eq!(a, b);
            assert!(a.pixels().iter().flatten().all(|v| (0.0..=1.0).contains(v)));
        }
        assert_eq!(
            tmo_default(&hdr, &TmoParams::default()).unwrap(),
            tone_map(&hdr, &TmoParams::with_operator(Operator::GlobalPhotographic))
                .unwrap()
                .0
        );
        assert!(tmo_reinhard_global(&hdr, &TmoParams::default()).is_ok());
        assert!(tmo_drago(&hdr, &TmoParams::default()).is_ok());
    }

    #[test]
    fn monotone_in_luminance_for_fixed_chromaticity() {
        let hdr = HdrImage::from_fn(64, 1, |x, _| {
            let e = pow(1.25, x as f64) * 1e-3;
            [e * 0.7, e * 0.4, e * 0.2]
        })
        .unwrap();
        for op in Operator::ALL {
            let (ldr, _) = tone_map(&hdr, &TmoParams::with_operator(op)).unwrap();
            let lum: Vec<f64> = ldr.pixels().iter().map(|&p| luminance(p)).collect();
            for w in lum.windows(2) {
                assert!(w[1] >= w[0], "{op:?}");
            }
        }
    }

    #[test]
    fn gamma_encoding_shifts_hue() {
        // Ratios survive recombination but not the per-channel power law.
        let hdr = HdrImage::new(1, 1, vec![[0.9, 0.4, 0.1]]).unwrap();
        let curve = ToneCurve::fit(&hdr, &TmoParams::default()).unwrap();
        let linear = recombine(hdr.pixels()[0], luminance(hdr.pixels()[0]), 0.3, 1.0);
        let c_h = max_sat_color(hdr.pixels()[0]).color().unwrap();
        let c_lin = max_sat_color(linear).color().unwrap();
        assert!((c_h[1] - c_lin[1]).abs() < 1e-12);
        let ldr = curve.apply(&hdr);
        let c = max_sat_color(ldr.pixels()[0]).color().unwrap();
        assert!((c[1] - c_h[1]).abs() > 0.05);
    }

    #[test]
    fn inverse_round_trips() {
        let hdr = test_image();
        for op in Operator::ALL {
            let curve = ToneCurve::fit(&hdr, &TmoParams::with_operator(op)).unwrap();
            let top = curve.map_scaled(curve.max_scaled);
            for i in 1..1000 {
                let d = top * i as f64 / 1000.0;
                let back = curve.map_scaled(curve.invert_scaled(d));
                assert!((back - d).abs() <= 1e-9 * d, "{op:?}: {d} -> {back}");
            }
        }
    }
}
