use huecodec_core::hueplane::{compensate_pixel, hue_coords, max_sat_color, recompose, MaxSatColor};
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0f64]
}

fn pixel() -> impl Strategy<Value = [f64; 3]> {
    [unit(), unit(), unit()]
}

/// Pixels whose spread is comfortably above the achromatic threshold.
fn chromatic() -> impl Strategy<Value = [f64; 3]> {
    pixel().prop_filter("chromatic", |p| {
        let (lo, hi) = (p[0].min(p[1]).min(p[2]), p[0].max(p[1]).max(p[2]));
        hi - lo > 1e-6
    })
}

fn hdr_chromatic() -> impl Strategy<Value = [f64; 3]> {
    (chromatic(), -8.0..8.0f64).prop_map(|(p, e)| p.map(|v| v * 2f64.powf(e)))
}

fn argmin_argmax(p: [f64; 3]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for i in 1..3 {
        if p[i] < p[lo] {
            lo = i;
        }
        if p[i] > p[hi] {
            hi = i;
        }
    }
    (lo, hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4096))]

    #[test]
    fn decompose_recompose_identity(x in pixel()) {
        let back = recompose(hue_coords(x).unwrap(), max_sat_color(x)).unwrap();
        for c in 0..3 {
            prop_assert!((back[c] - x[c]).abs() <= 1e-12);
        }
    }

    #[test]
    fn barycentric_constraints(x in pixel()) {
        let h = hue_coords(x).unwrap();
        prop_assert!((h.white + h.black + h.chroma - 1.0).abs() <= 1e-12);
        for v in [h.white, h.black, h.chroma] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn max_sat_color_spans_unit_interval(x in chromatic()) {
        let c = max_sat_color(x).color().unwrap();
        let (lo, hi) = argmin_argmax(x);
        prop_assert_eq!(c[lo], 0.0);
        prop_assert_eq!(c[hi], 1.0);
    }

    #[test]
    fn hue_transfer(l in chromatic(), h in hdr_chromatic()) {
        let out = compensate_pixel(l, h).unwrap();
        let (c_out, c_h) = match (max_sat_color(out), max_sat_color(h)) {
            (MaxSatColor::Chromatic(a), MaxSatColor::Chromatic(b)) => (a, b),
            other => return Err(TestCaseError::fail(format!("lost chroma: {other:?}"))),
        };
        for c in 0..3 {
            prop_assert!((c_out[c] - c_h[c]).abs() <= 1e-12, "{c_out:?} vs {c_h:?}");
        }
    }

    #[test]
    fn value_preservation(l in chromatic(), h in hdr_chromatic()) {
        let out = compensate_pixel(l, h).unwrap();
        let min = |p: [f64; 3]| p[0].min(p[1]).min(p[2]);
        let max = |p: [f64; 3]| p[0].max(p[1]).max(p[2]);
        prop_assert!((min(out) - min(l)).abs() <= 1e-12);
        prop_assert!((max(out) - max(l)).abs() <= 1e-12);
    }

    #[test]
    fn compensation_is_idempotent(l in pixel(), h in hdr_chromatic()) {
        let once = compensate_pixel(l, h).unwrap();
        let twice = compensate_pixel(once, h).unwrap();
        for c in 0..3 {
            prop_assert!((once[c] - twice[c]).abs() <= 1e-12);
        }
    }

    #[test]
    fn gray_sides_pass_through(l in pixel(), g in 0.0..100.0f64) {
        prop_assert_eq!(compensate_pixel(l, [g; 3]).unwrap(), l);
        let gray = [l[0]; 3];
        prop_assert_eq!(compensate_pixel(gray, [g, 2.0 * g + 1.0, 0.5 * g]).unwrap(), gray);
    }
}
