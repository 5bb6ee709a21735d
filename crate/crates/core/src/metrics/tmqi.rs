//! Tone Mapped image Quality Index.
//!
//! `Q = a·S^α + (1 − a)·N^β`, where `S` compares local structure of the
//! HDR and LDR luminance over five dyadic scales and `N` scores how natural
//! the LDR brightness and contrast statistics are. Constants and the
//! processing chain follow the published reference implementation: HDR
//! luminance stretched to `[0, 2³² − 1]`, LDR luminance on `[0, 255]`, an
//! 11×11 Gaussian window (σ = 1.5) with valid-region filtering, and 2×2
//! box averaging between scales.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{ensure_same_dims, HdrImage, LdrImage};
use crate::math::{erf, exp, mean, pow, round, sqrt};
use crate::tmo::luminance;

pub const TMQI_A: f64 = 0.8012;
pub const TMQI_ALPHA: f64 = 0.3046;
pub const TMQI_BETA: f64 = 0.7088;

const SCALE_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
const WINDOW: usize = 11;
const WINDOW_SIGMA: f64 = 1.5;
const C1: f64 = 0.01;
const C2: f64 = 10.0;

// Naturalness model: Gaussian over mean brightness, Beta over contrast.
const BRIGHTNESS_MEAN: f64 = 115.94;
const BRIGHTNESS_STD: f64 = 27.99;
const CONTRAST_ALPHA: f64 = 4.4;
const CONTRAST_BETA: f64 = 10.1;
const CONTRAST_SCALE: f64 = 64.29;
const CONTRAST_BLOCK: usize = 11;

/// Smallest side length for which the coarsest scale still fits one window.
pub const TMQI_MIN_SIZE: usize = 16 * (WINDOW - 1) + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmqiScore {
    /// Overall quality.
    pub q: f64,
    /// Structural fidelity.
    pub s: f64,
    /// Statistical naturalness.
    pub n: f64,
}

/// A single-channel row-major image.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(width * height, data.len());
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    fn at(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Plane {
        Plane::new(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }

    fn zip(&self, other: &Plane, f: impl Fn(f64, f64) -> f64) -> Plane {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Plane::new(self.width, self.height, data)
    }
}

/// HDR luminance stretched to `[0, 2³² − 1]`.
pub fn hdr_luminance_plane(hdr: &HdrImage) -> Plane {
    let lum: Vec<f64> = hdr.pixels().iter().map(|&p| luminance(p)).collect();
    let lo = lum.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lum.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let factor = if hi > lo {
        round((4_294_967_295.0) / (hi - lo))
    } else {
        0.0
    };
    Plane::new(
        hdr.width(),
        hdr.height(),
        lum.iter().map(|&l| factor * (l - lo)).collect(),
    )
}

/// LDR luminance on the 8-bit scale `[0, 255]`.
pub fn ldr_luminance_plane(ldr: &LdrImage) -> Plane {
    Plane::new(
        ldr.width(),
        ldr.height(),
        ldr.pixels().iter().map(|&p| 255.0 * luminance(p)).collect(),
    )
}

fn gaussian_kernel() -> [f64; WINDOW] {
    let mut k = [0.0; WINDOW];
    let half = (WINDOW / 2) as f64;
    for (i, v) in k.iter_mut().enumerate() {
        let d = i as f64 - half;
        *v = exp(-(d * d) / (2.0 * WINDOW_SIGMA * WINDOW_SIGMA));
    }
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

// Separable equivalent of correlating with the normalized 2-D Gaussian,
// keeping only positions where the window fits.
fn filter_valid(p: &Plane, k: &[f64; WINDOW]) -> Plane {
    let ow = p.width + 1 - WINDOW;
    let oh = p.height + 1 - WINDOW;
    let mut rows = vec![0.0; ow * p.height];
    for y in 0..p.height {
        let row = &p.data[y * p.width..(y + 1) * p.width];
        for x in 0..ow {
            let mut acc = 0.0;
            for (t, &w) in k.iter().enumerate() {
                acc += w * row[x + t];
            }
            rows[y * ow + x] = acc;
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            let mut acc = 0.0;
            for (t, &w) in k.iter().enumerate() {
                acc += w * rows[(y + t) * ow + x];
            }
            out[y * ow + x] = acc;
        }
    }
    Plane::new(ow, oh, out)
}

// 2x2 mean with symmetric edge extension, then keep every other sample.
fn downsample(p: &Plane) -> Plane {
    let ow = p.width.div_ceil(2);
    let oh = p.height.div_ceil(2);
    let mut out = Vec::with_capacity(ow * oh);
    for y in 0..oh {
        let y0 = 2 * y;
        let y1 = (y0 + 1).min(p.height - 1);
        for x in 0..ow {
            let x0 = 2 * x;
            let x1 = (x0 + 1).min(p.width - 1);
            out.push(0.25 * (p.at(x0, y0) + p.at(x1, y0) + p.at(x0, y1) + p.at(x1, y1)));
        }
    }
    Plane::new(ow, oh, out)
}

#[inline]
fn normal_cdf(x: f64, mu: f64, sigma: f64) -> f64 {
    0.5 * (1.0 + erf((x - mu) / (sigma * core::f64::consts::SQRT_2)))
}

fn contrast_sensitivity(spatial_freq: f64) -> f64 {
    100.0 * 2.6 * (0.0192 + 0.114 * spatial_freq) * exp(-pow(0.114 * spatial_freq, 1.1))
}

/// Mean local structural similarity at one scale.
fn local_structure(hdr: &Plane, ldr: &Plane, spatial_freq: f64, k: &[f64; WINDOW]) -> f64 {
    let mu1 = filter_valid(hdr, k);
    let mu2 = filter_valid(ldr, k);
    let e11 = filter_valid(&hdr.map(|v| v * v), k);
    let e22 = filter_valid(&ldr.map(|v| v * v), k);
    let e12 = filter_valid(&hdr.zip(ldr, |a, b| a * b), k);

    let threshold = 128.0 / (1.4 * contrast_sensitivity(spatial_freq));
    let spread = threshold / 3.0;

    let n = mu1.data.len();
    let mut map = Vec::with_capacity(n);
    for i in 0..n {
        let s1 = sqrt((e11.data[i] - mu1.data[i] * mu1.data[i]).max(0.0));
        let s2 = sqrt((e22.data[i] - mu2.data[i] * mu2.data[i]).max(0.0));
        let s12 = e12.data[i] - mu1.data[i] * mu2.data[i];
        let p1 = normal_cdf(s1, threshold, spread);
        let p2 = normal_cdf(s2, threshold, spread);
        let strength = (2.0 * p1 * p2 + C1) / (p1 * p1 + p2 * p2 + C1);
        let structure = (s12 + C2) / (s1 * s2 + C2);
        map.push(strength * structure);
    }
    mean(&map)
}

fn check_size(width: usize, height: usize) -> Result<()> {
    if width < TMQI_MIN_SIZE || height < TMQI_MIN_SIZE {
        return Err(Error::TooSmall {
            min: TMQI_MIN_SIZE,
            width,
            height,
        });
    }
    Ok(())
}

/// Multi-scale structural fidelity `S` between two luminance planes.
///
/// The first plane is the reference. Identical planes give `S = 1`.
pub fn structural_fidelity(reference: &Plane, test: &Plane) -> Result<f64> {
    ensure_same_dims(
        (reference.width, reference.height),
        (test.width, test.height),
    )?;
    check_size(reference.width, reference.height)?;
    let k = gaussian_kernel();
    let mut a = reference.clone();
    let mut b = test.clone();
    let mut freq = 32.0;
    let mut s = 1.0;
    for (level, &w) in SCALE_WEIGHTS.iter().enumerate() {
        freq /= 2.0;
        let local = local_structure(&a, &b, freq, &k).clamp(0.0, 1.0);
        s *= pow(local, w);
        if level + 1 < SCALE_WEIGHTS.len() {
            a = downsample(&a);
            b = downsample(&b);
        }
    }
    Ok(s)
}

/// Naturalness from a brightness mean and a mean block contrast, both on
/// the 8-bit scale. Peaks at 1 on the model's modes.
pub fn naturalness_from_stats(brightness: f64, contrast: f64) -> f64 {
    let d = brightness - BRIGHTNESS_MEAN;
    let pb = exp(-(d * d) / (2.0 * BRIGHTNESS_STD * BRIGHTNESS_STD));

    let x = contrast / CONTRAST_SCALE;
    let mode = (CONTRAST_ALPHA - 1.0) / (CONTRAST_ALPHA + CONTRAST_BETA - 2.0);
    let pc = if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        pow(x / mode, CONTRAST_ALPHA - 1.0) * pow((1.0 - x) / (1.0 - mode), CONTRAST_BETA - 1.0)
    };
    pb * pc
}

/// Contrast value at which [`naturalness_from_stats`] peaks.
pub fn modal_contrast() -> f64 {
    CONTRAST_SCALE * (CONTRAST_ALPHA - 1.0) / (CONTRAST_ALPHA + CONTRAST_BETA - 2.0)
}

/// Mean brightness at which [`naturalness_from_stats`] peaks.
pub fn modal_brightness() -> f64 {
    BRIGHTNESS_MEAN
}

/// Statistical naturalness `N` of an 8-bit-scale luminance plane.
///
/// Contrast is the mean sample standard deviation over non-overlapping
/// 11×11 blocks; partial edge blocks are zero-padded like the reference.
pub fn statistical_naturalness(ldr: &Plane) -> f64 {
    let brightness = mean(&ldr.data);
    let bw = ldr.width.div_ceil(CONTRAST_BLOCK);
    let bh = ldr.height.div_ceil(CONTRAST_BLOCK);
    let mut stds = Vec::with_capacity(bw * bh);
    let mut block = Vec::with_capacity(CONTRAST_BLOCK * CONTRAST_BLOCK);
    for by in 0..bh {
        for bx in 0..bw {
            block.clear();
            for y in by * CONTRAST_BLOCK..(by + 1) * CONTRAST_BLOCK {
                for x in bx * CONTRAST_BLOCK..(bx + 1) * CONTRAST_BLOCK {
                    let v = if x < ldr.width && y < ldr.height {
                        ldr.at(x, y)
                    } else {
                        0.0
                    };
                    block.push(v);
                }
            }
            let m = mean(&block);
            let ss: Vec<f64> = block.iter().map(|v| (v - m) * (v - m)).collect();
            stds.push(sqrt(mean(&ss) * block.len() as f64 / (block.len() - 1) as f64));
        }
    }
    naturalness_from_stats(brightness, mean(&stds))
}

pub fn tmqi(ldr: &LdrImage, hdr: &HdrImage) -> Result<TmqiScore> {
    ensure_same_dims(hdr.dims(), ldr.dims())?;
    check_size(ldr.width(), ldr.height())?;
    let hdr_lum = hdr_luminance_plane(hdr);
    let ldr_lum = ldr_luminance_plane(ldr);
    let s = structural_fidelity(&hdr_lum, &ldr_lum)?;
    let n = statistical_naturalness(&ldr_lum);
    Ok(TmqiScore {
        q: combine(s, n),
        s,
        n,
    })
}

/// `a·S^α + (1 − a)·N^β`.
pub fn combine(s: f64, n: f64) -> f64 {
    TMQI_A * pow(s, TMQI_ALPHA) + (1.0 - TMQI_A) * pow(n, TMQI_BETA)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn textured(w: usize, h: usize) -> Plane {
        let data = (0..w * h)
            .map(|i| {
                let (x, y) = ((i % w) as f64, (i / w) as f64);
                120.0 + 60.0 * crate::math::sin(x * 0.3) * crate::math::cos(y * 0.17) + (x * 7.0 + y * 13.0) % 11.0
            })
            .collect();
        Plane::new(w, h, data)
    }

    #[test]
    fn identical_planes_have_unit_structure() {
        let p = textured(TMQI_MIN_SIZE + 20, TMQI_MIN_SIZE + 3);
        let s = structural_fidelity(&p, &p).unwrap();
        assert!((s - 1.0).abs() < 1e-9, "{s}");
        let flat = Plane::new(180, 180, vec![77.0; 180 * 180]);
        assert!((structural_fidelity(&flat, &flat).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn naturalness_peaks_at_model_modes() {
        let peak = naturalness_from_stats(modal_brightness(), modal_contrast());
        assert!((peak - 1.0).abs() < 1e-12);
        for (b, c) in [(100.0, 17.0), (130.0, 20.0), (115.94, 10.0), (60.0, 17.487)] {
            assert!(naturalness_from_stats(b, c) < peak);
        }
        assert_eq!(naturalness_from_stats(115.94, 0.0), 0.0);
        assert_eq!(naturalness_from_stats(115.94, 70.0), 0.0);
    }

    #[test]
    fn block_std_of_constant_plane_is_zero() {
        let flat = Plane::new(22, 22, vec![128.0; 22 * 22]);
        assert_eq!(statistical_naturalness(&flat), 0.0);
    }

    #[test]
    fn too_small_is_rejected() {
        let ldr = LdrImage::new(8, 8, vec![[0.5; 3]; 64]).unwrap();
        let hdr = HdrImage::new(8, 8, vec![[0.5; 3]; 64]).unwrap();
        assert!(matches!(tmqi(&ldr, &hdr), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn quality_is_monotone_in_structure() {
        let n = 0.4;
        let mut prev = combine(0.0, n);
        for i in 1..=100 {
            let q = combine(i as f64 / 100.0, n);
            assert!(q > prev);
            prev = q;
        }
        assert!((combine(1.0, 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn downsample_handles_odd_sizes() {
        let p = Plane::new(3, 1, vec![1.0, 3.0, 5.0]);
        let d = downsample(&p);
        assert_eq!((d.width, d.height), (2, 1));
        assert_eq!(d.data, vec![2.0, 5.0]);
    }
}
