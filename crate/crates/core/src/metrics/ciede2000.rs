//! CIEDE2000 color difference, exposing its weighted terms.
//!
//! Hue angles are in degrees throughout, following the usual published
//! test data; `k_L = k_C = k_H = 1`.

use core::f64::consts::PI;

use super::lab::Lab;
use crate::math::{atan2, cos, exp, pow, sin, sqrt};

const POW25_7: f64 = 6_103_515_625.0; // 25^7

/// The three weighted differences and the rotation term of ΔE00.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ciede2000Terms {
    /// ΔL' / (k_L S_L)
    pub lightness: f64,
    /// ΔC' / (k_C S_C)
    pub chroma: f64,
    /// ΔH' / (k_H S_H)
    pub hue: f64,
    /// R_T
    pub rotation: f64,
}

impl Ciede2000Terms {
    pub fn delta_e(&self) -> f64 {
        sqrt(
            self.lightness * self.lightness
                + self.chroma * self.chroma
                + self.hue * self.hue
                + self.rotation * self.chroma * self.hue,
        )
    }
}

#[inline]
fn deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}

#[inline]
fn rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

fn hue_angle(b: f64, a_prime: f64) -> f64 {
    if b == 0.0 && a_prime == 0.0 {
        return 0.0;
    }
    let h = deg(atan2(b, a_prime));
    if h < 0.0 {
        h + 360.0
    } else {
        h
    }
}

pub fn ciede2000_terms(p1: Lab, p2: Lab) -> Ciede2000Terms {
    let c1 = sqrt(p1.a * p1.a + p1.b * p1.b);
    let c2 = sqrt(p2.a * p2.a + p2.b * p2.b);
    let c_bar = 0.5 * (c1 + c2);
    let c_bar7 = pow(c_bar, 7.0);
    let g = 0.5 * (1.0 - sqrt(c_bar7 / (c_bar7 + POW25_7)));

    let a1p = (1.0 + g) * p1.a;
    let a2p = (1.0 + g) * p2.a;
    let c1p = sqrt(a1p * a1p + p1.b * p1.b);
    let c2p = sqrt(a2p * a2p + p2.b * p2.b);
    let h1p = hue_angle(p1.b, a1p);
    let h2p = hue_angle(p2.b, a2p);

    let dl = p2.l - p1.l;
    let dc = c2p - c1p;
    let chroma_product = c1p * c2p;
    let dh_angle = if chroma_product == 0.0 {
        0.0
    } else {
        let d = h2p - h1p;
        if d > 180.0 {
            d - 360.0
        } else if d < -180.0 {
            d + 360.0
        } else {
            d
        }
    };
    let dh = 2.0 * sqrt(chroma_product) * sin(rad(dh_angle) / 2.0);

    let l_bar = 0.5 * (p1.l + p2.l);
    let cp_bar = 0.5 * (c1p + c2p);
    let hp_bar = if chroma_product == 0.0 {
        h1p + h2p
    } else if (h1p - h2p).abs() <= 180.0 {
        0.5 * (h1p + h2p)
    } else if h1p + h2p < 360.0 {
        0.5 * (h1p + h2p + 360.0)
    } else {
        0.5 * (h1p + h2p - 360.0)
    };

    let t = 1.0 - 0.17 * cos(rad(hp_bar - 30.0)) + 0.24 * cos(rad(2.0 * hp_bar))
        + 0.32 * cos(rad(3.0 * hp_bar + 6.0))
        - 0.20 * cos(rad(4.0 * hp_bar - 63.0));
    let d_theta = 30.0 * exp(-pow((hp_bar - 275.0) / 25.0, 2.0));
    let cp_bar7 = pow(cp_bar, 7.0);
    let r_c = 2.0 * sqrt(cp_bar7 / (cp_bar7 + POW25_7));
    let l50 = (l_bar - 50.0) * (l_bar - 50.0);
    let s_l = 1.0 + 0.015 * l50 / sqrt(20.0 + l50);
    let s_c = 1.0 + 0.045 * cp_bar;
    let s_h = 1.0 + 0.015 * cp_bar * t;
    let r_t = -sin(rad(2.0 * d_theta)) * r_c;

    Ciede2000Terms {
        lightness: dl / s_l,
        chroma: dc / s_c,
        hue: dh / s_h,
        rotation: r_t,
    }
}

/// Full ΔE00.
pub fn ciede2000(p1: Lab, p2: Lab) -> f64 {
    ciede2000_terms(p1, p2).delta_e()
}

/// `|ΔH' / (k_H S_H)|`, the hue term of ΔE00.
pub fn ciede2000_hue(p1: Lab, p2: Lab) -> f64 {
    ciede2000_terms(p1, p2).hue.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_neutral_pairs_have_no_hue_difference() {
        let p = Lab::new(40.0, 12.0, -30.0);
        assert_eq!(ciede2000_hue(p, p), 0.0);
        assert_eq!(ciede2000(p, p), 0.0);
        let g1 = Lab::new(20.0, 0.0, 0.0);
        let g2 = Lab::new(90.0, 0.0, 0.0);
        assert_eq!(ciede2000_hue(g1, g2), 0.0);
    }

    #[test]
    fn hue_term_is_symmetric() {
        let a = Lab::new(50.0, 2.5, 0.0);
        let b = Lab::new(56.0, -27.0, -3.0);
        assert!((ciede2000_hue(a, b) - ciede2000_hue(b, a)).abs() < 1e-12);
        assert!((ciede2000(a, b) - ciede2000(b, a)).abs() < 1e-12);
    }

    #[test]
    fn pure_hue_rotation_is_mostly_hue() {
        let a = Lab::new(50.0, 0.0, 30.0);
        let b = Lab::new(50.0, 0.0, -30.0);
        let t = ciede2000_terms(a, b);
        assert!(t.lightness.abs() < 1e-12);
        assert!(t.chroma.abs() < 1e-9);
        assert!(t.hue.abs() > 10.0);
    }
}
