//! Deterministic synthetic HDR scenes for regression runs.
//!
//! Each scene spans several orders of magnitude and mixes smooth gradients
//! with texture, and most pixels have three distinct channel values so that
//! per-channel gamma visibly shifts their hue.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use huecodec_core::{HdrImage, Rgb};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hdr_io::{write_pfm, Result};

pub const WIDTH: usize = 256;
pub const HEIGHT: usize = 192;

/// `(h in [0, 1), s, v) → RGB`.
fn hsv(h: f64, s: f64, v: f64) -> Rgb {
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let i = h6.floor() as i32;
    let f = h6 - i as f64;
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - s * f), v * (1.0 - s * (1.0 - f)));
    match i {
        0 => [v, t, p],
        1 => [q, v, p],
        2 => [p, v, t],
        3 => [p, q, v],
        4 => [t, p, v],
        _ => [v, p, q],
    }
}

fn scale(c: Rgb, k: f64) -> Rgb {
    [c[0] * k, c[1] * k, c[2] * k]
}

fn add(a: Rgb, b: Rgb) -> Rgb {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn lerp(a: Rgb, b: Rgb, t: f64) -> Rgb {
    [
        a[0] + (b[0] - a[0]) * t,
        a[1] + (b[1] - a[1]) * t,
        a[2] + (b[2] - a[2]) * t,
    ]
}

/// Smooth lattice noise in `[0, 1]`, summed over octaves.
struct ValueNoise {
    grid: Vec<f64>,
    size: usize,
}

impl ValueNoise {
    fn new(rng: &mut ChaCha8Rng, size: usize) -> Self {
        Self {
            grid: (0..size * size).map(|_| rng.random::<f64>()).collect(),
            size,
        }
    }

    fn lattice(&self, x: i64, y: i64) -> f64 {
        let n = self.size as i64;
        self.grid[(y.rem_euclid(n) * n + x.rem_euclid(n)) as usize]
    }

    fn sample(&self, x: f64, y: f64) -> f64 {
        let (x0, y0) = (x.floor(), y.floor());
        let (fx, fy) = (x - x0, y - y0);
        let (sx, sy) = (fx * fx * (3.0 - 2.0 * fx), fy * fy * (3.0 - 2.0 * fy));
        let (ix, iy) = (x0 as i64, y0 as i64);
        let top = self.lattice(ix, iy) * (1.0 - sx) + self.lattice(ix + 1, iy) * sx;
        let bottom = self.lattice(ix, iy + 1) * (1.0 - sx) + self.lattice(ix + 1, iy + 1) * sx;
        top * (1.0 - sy) + bottom * sy
    }

    fn fractal(&self, x: f64, y: f64, octaves: u32) -> f64 {
        let (mut amp, mut freq, mut sum, mut norm) = (1.0, 1.0, 0.0, 0.0);
        for _ in 0..octaves {
            sum += amp * self.sample(x * freq, y * freq);
            norm += amp;
            amp *= 0.5;
            freq *= 2.0;
        }
        sum / norm
    }
}

fn build(f: impl FnMut(usize, usize) -> Rgb) -> HdrImage {
    let mut f = f;
    HdrImage::from_fn(WIDTH, HEIGHT, |x, y| {
        let p = f(x, y);
        [p[0].max(0.0), p[1].max(0.0), p[2].max(0.0)]
    })
    .expect("synthetic scene is valid")
}

fn sunset() -> HdrImage {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let noise = ValueNoise::new(&mut rng, 64);
    let horizon = HEIGHT as f64 * 0.62;
    let (sun_x, sun_y) = (WIDTH as f64 * 0.68, horizon - 18.0);
    build(|x, y| {
        let (xf, yf) = (x as f64, y as f64);
        if yf < horizon {
            let t = yf / horizon;
            let sky = lerp([0.08, 0.16, 0.55], [3.2, 1.3, 0.35], t * t);
            let cloud = noise.fractal(xf / 40.0, yf / 18.0, 4);
            let d = ((xf - sun_x).powi(2) + (yf - sun_y).powi(2)).sqrt();
            let glow = 40.0 / (1.0 + (d / 6.0).powi(2));
            let disk = if d < 9.0 { 400.0 } else { 0.0 };
            add(scale(sky, 0.6 + 0.8 * cloud), scale([1.0, 0.62, 0.28], glow + disk))
        } else {
            let n = noise.fractal(xf / 9.0, yf / 5.0, 5);
            let reflect = (1.0 - (yf - horizon) / (HEIGHT as f64 - horizon)).powi(3);
            let near_sun = 8.0 / (1.0 + ((xf - sun_x) / 10.0).powi(2)) * reflect;
            add(scale([0.06, 0.045, 0.02], 0.4 + n), scale([1.0, 0.55, 0.22], near_sun * n))
        }
    })
}

fn patches() -> HdrImage {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (cols, rows) = (8usize, 6usize);
    let colors: Vec<(Rgb, f64)> = (0..cols * rows)
        .map(|i| {
            let hue = rng.random::<f64>();
            let sat = 0.35 + 0.6 * rng.random::<f64>();
            let stops = -6.0 + 12.0 * (i as f64 / (cols * rows - 1) as f64) + rng.random::<f64>();
            (hsv(hue + 1.0 / 24.0, sat, 1.0), 2f64.powf(stops))
        })
        .collect();
    let mut grain = ChaCha8Rng::seed_from_u64(20);
    let noise: Vec<f64> = (0..WIDTH * HEIGHT).map(|_| grain.random::<f64>()).collect();
    build(|x, y| {
        let (pw, ph) = (WIDTH / cols, HEIGHT / rows);
        let (cx, cy) = (x / pw, y / ph);
        let (lx, ly) = (x % pw, y % ph);
        let n = 1.0 + 0.04 * (noise[y * WIDTH + x] - 0.5);
        if lx < 3 || ly < 3 {
            return [0.02 * n, 0.021 * n, 0.019 * n];
        }
        let (c, k) = colors[cy * cols + cx];
        // soft vignette inside each patch
        let u = (lx as f64 / pw as f64 - 0.5).abs() + (ly as f64 / ph as f64 - 0.5).abs();
        scale(c, k * (1.1 - 0.4 * u) * n)
    })
}

fn interior() -> HdrImage {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let noise = ValueNoise::new(&mut rng, 32);
    let objects: Vec<(f64, f64, f64, Rgb)> = (0..9)
        .map(|_| {
            (
                rng.random_range(10.0..150.0),
                rng.random_range(90.0..180.0),
                rng.random_range(8.0..26.0),
                hsv(rng.random::<f64>(), rng.random_range(0.4..0.9), 1.0),
            )
        })
        .collect();
    let (win_x0, win_x1, win_y0, win_y1) = (165.0, 240.0, 20.0, 110.0);
    build(|x, y| {
        let (xf, yf) = (x as f64, y as f64);
        if (win_x0..win_x1).contains(&xf) && (win_y0..win_y1).contains(&yf) {
            let t = (yf - win_y0) / (win_y1 - win_y0);
            let sky = lerp([18.0, 30.0, 70.0], [40.0, 45.0, 38.0], t);
            let tree = noise.fractal(xf / 7.0, yf / 7.0, 4);
            if tree > 0.55 && t > 0.35 {
                return scale([0.9, 2.4, 0.5], 3.0 * tree);
            }
            return sky;
        }
        let d = ((xf - 200.0).powi(2) + (yf - 65.0).powi(2)).sqrt();
        let light = 0.02 + 4.0 / (1.0 + (d / 35.0).powi(2));
        let wall = scale([0.55, 0.45, 0.33], light * (0.85 + 0.3 * noise.fractal(xf / 20.0, yf / 20.0, 3)));
        for &(ox, oy, r, c) in &objects {
            let dd = ((xf - ox).powi(2) + (yf - oy).powi(2)).sqrt();
            if dd < r {
                let shade = 1.0 - 0.6 * dd / r;
                return scale(c, light * 0.9 * shade);
            }
        }
        wall
    })
}

fn hue_sweep() -> HdrImage {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let noise = ValueNoise::new(&mut rng, 48);
    build(|x, y| {
        let (xf, yf) = (x as f64, y as f64);
        let hue = xf / WIDTH as f64 + 0.03 * noise.fractal(xf / 30.0, yf / 30.0, 3);
        let sat = 0.3 + 0.6 * (0.5 + 0.5 * (yf / 13.0 + xf / 29.0).sin());
        let stops = 8.0 - 12.0 * yf / HEIGHT as f64;
        scale(hsv(hue + 1.0 / 12.0, sat, 1.0), 2f64.powf(stops))
    })
}

fn foliage() -> HdrImage {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let leaves = ValueNoise::new(&mut rng, 64);
    let light = ValueNoise::new(&mut rng, 64);
    build(|x, y| {
        let (xf, yf) = (x as f64, y as f64);
        let l = leaves.fractal(xf / 14.0, yf / 14.0, 5);
        let base = lerp([0.10, 0.35, 0.05], [0.65, 0.55, 0.08], l);
        let base = lerp(base, [0.55, 0.22, 0.06], (leaves.fractal(xf / 50.0 + 7.0, yf / 50.0, 2) - 0.5).max(0.0) * 2.0);
        let s = light.fractal(xf / 25.0, yf / 25.0, 3);
        let dapple = if s > 0.62 { 30.0 * (s - 0.62) / 0.38 + 2.0 } else { 0.08 + 1.5 * s };
        scale(base, dapple)
    })
}

fn neon() -> HdrImage {
    let tubes: [(f64, f64, f64, f64, Rgb); 5] = [
        (30.0, 40.0, 120.0, 60.0, [9.0, 0.6, 6.0]),
        (60.0, 150.0, 220.0, 130.0, [0.4, 7.0, 8.5]),
        (180.0, 30.0, 240.0, 100.0, [12.0, 4.5, 0.6]),
        (20.0, 110.0, 90.0, 175.0, [2.0, 9.0, 1.0]),
        (130.0, 80.0, 160.0, 170.0, [5.0, 1.5, 11.0]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let noise = ValueNoise::new(&mut rng, 32);
    build(|x, y| {
        let (xf, yf) = (x as f64, y as f64);
        let mut acc = scale([0.012, 0.014, 0.03], 0.6 + 0.8 * noise.fractal(xf / 16.0, yf / 16.0, 4));
        for &(x0, y0, x1, y1, c) in &tubes {
            let (dx, dy) = (x1 - x0, y1 - y0);
            let t = (((xf - x0) * dx + (yf - y0) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
            let d = ((xf - x0 - t * dx).powi(2) + (yf - y0 - t * dy).powi(2)).sqrt();
            let core = if d < 2.0 { 8.0 } else { 0.0 };
            let glow = 1.0 / (1.0 + (d / 4.0).powi(2)) + 0.05 * (-d / 30.0).exp();
            acc = add(acc, scale(c, core + glow));
        }
        // a faint wavy reflection keeps the background textured
        let ripple = 0.5 + 0.5 * (xf / 9.0 + (yf / 17.0 * PI).sin()).sin();
        scale(acc, 0.9 + 0.2 * ripple)
    })
}

/// The regression corpus as `(name, image)` pairs, in a fixed order.
pub fn synthetic_corpus() -> Vec<(String, HdrImage)> {
    vec![
        ("sunset".to_string(), sunset()),
        ("patches".to_string(), patches()),
        ("interior".to_string(), interior()),
        ("hue_sweep".to_string(), hue_sweep()),
        ("foliage".to_string(), foliage()),
        ("neon".to_string(), neon()),
    ]
}

/// Writes the corpus as PFM files plus a `manifest.txt` and returns the
/// manifest path.
pub fn write_corpus(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let manifest = dir.join("manifest.txt");
    let mut m = fs::File::create(&manifest)?;
    for (name, img) in synthetic_corpus() {
        let file = format!("{name}.pfm");
        fs::write(dir.join(&file), write_pfm(&img))?;
        writeln!(m, "{file} {name}")?;
    }
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_high_dynamic_range() {
        let a = synthetic_corpus();
        let b = synthetic_corpus();
        assert_eq!(a.len(), 6);
        for ((na, ia), (nb, ib)) in a.iter().zip(&b) {
            assert_eq!(na, nb);
            assert_eq!(ia, ib);
            let lum: Vec<f64> = ia
                .pixels()
                .iter()
                .map(|p| huecodec_core::tmo::luminance(*p))
                .collect();
            let hi = lum.iter().copied().fold(0.0, f64::max);
            let lo = lum.iter().copied().filter(|v| *v > 0.0).fold(f64::INFINITY, f64::min);
            assert!(hi / lo > 100.0, "{na}: dynamic range {}", hi / lo);
        }
    }
}
