mod common;

use std::f64::consts::TAU;

use common::{naive_threshold, random_gray, XorShift};
use fpforge::imagecore::{build_integral, ForegroundMask, GrayImage, BACKGROUND, FOREGROUND};
use fpforge::sauvola::{
    binarize, binarize_raw, estimate_foreground, sauvola_threshold, SauvolaParams, DEFAULT_FG_BLOCK, DEFAULT_FG_STD,
};
use proptest::prelude::*;

fn full(img: &GrayImage) -> ForegroundMask {
    ForegroundMask::filled(img.width(), img.height(), true).unwrap()
}

#[test]
fn zero_variance_window() {
    let ip = build_integral(&GrayImage::filled(12, 12, 100.0).unwrap()).unwrap();
    let t = sauvola_threshold(&ip, 5, 5, &SauvolaParams::default()).unwrap();
    assert!((t - 99.3).abs() < 1e-12);
}

#[test]
fn deviation_equal_to_range_cancels() {
    // the clipped 2x2 corner window of a checkerboard has m = s = 127.5
    let img = GrayImage::from_fn(6, 6, |x, y| if (x + y) % 2 == 0 { 0.0 } else { 255.0 }).unwrap();
    let p = SauvolaParams { window: 3, k: 0.3, range: 127.5 };
    let t = sauvola_threshold(&build_integral(&img).unwrap(), 0, 0, &p).unwrap();
    assert_eq!(t, 127.5);
}

#[test]
fn random_positions_match_oracle() {
    let mut rng = XorShift(0xabcdef);
    let img = random_gray(32, 32, &mut rng);
    let ip = build_integral(&img).unwrap();
    let p = SauvolaParams::default();
    for _ in 0..50 {
        let x = (rng.next_u64() % 32) as usize;
        let y = (rng.next_u64() % 32) as usize;
        let fast = sauvola_threshold(&ip, x, y, &p).unwrap();
        assert!((fast - naive_threshold(&img, x, y, 11, p.k, p.range)).abs() <= 1e-6);
    }
}

#[test]
fn constant_image_is_all_ridge() {
    let img = GrayImage::filled(20, 15, 90.0).unwrap();
    let bm = binarize(&img, &full(&img), &SauvolaParams::default()).unwrap();
    assert!(bm.data().iter().all(|&v| v == FOREGROUND));
}

#[test]
fn empty_mask_dominates() {
    let img = random_gray(20, 15, &mut XorShift(5));
    let mask = ForegroundMask::filled(20, 15, false).unwrap();
    let bm = binarize(&img, &mask, &SauvolaParams::default()).unwrap();
    assert!(bm.data().iter().all(|&v| v == BACKGROUND));
}

#[test]
fn sinusoid_gives_crest_bands() {
    let period = 9.0;
    let img = GrayImage::from_fn(99, 60, |x, _| 128.0 + 60.0 * (TAU * x as f64 / period).cos()).unwrap();
    let bm = binarize(&img, &full(&img), &SauvolaParams::default()).unwrap();
    let ridge = bm.foreground_count() as f64 / (99.0 * 60.0);
    assert!((0.35..=0.65).contains(&ridge), "ridge fraction {ridge}");
    // away from the zero crossings each column is wholly ridge on a crest
    // and wholly background in a trough
    for x in 6..93 {
        let c = (TAU * x as f64 / period).cos();
        if c.abs() < 0.5 {
            continue;
        }
        let ridge_rows = (0..60).filter(|&y| bm.is_foreground(x, y)).count();
        assert_eq!(ridge_rows, if c > 0.0 { 60 } else { 0 }, "column {x}");
    }
}

fn textured_patches(w: usize, h: usize, patches: &[(usize, usize, usize, usize)], seed: u64) -> GrayImage {
    let noise = random_gray(w, h, &mut XorShift(seed));
    GrayImage::from_fn(w, h, |x, y| {
        let inside = patches.iter().any(|&(x0, y0, pw, ph)| (x0..x0 + pw).contains(&x) && (y0..y0 + ph).contains(&y));
        if inside { noise.get(x, y) } else { 200.0 }
    })
    .unwrap()
}

#[test]
fn foreground_examples() {
    let flat = GrayImage::filled(64, 64, 120.0).unwrap();
    assert_eq!(estimate_foreground(&flat, DEFAULT_FG_BLOCK, DEFAULT_FG_STD).unwrap().count(), 0);

    let img = textured_patches(128, 128, &[(32, 32, 64, 64)], 11);
    let truth = ForegroundMask::from_fn(128, 128, |x, y| (32..96).contains(&x) && (32..96).contains(&y)).unwrap();
    let mask = estimate_foreground(&img, DEFAULT_FG_BLOCK, DEFAULT_FG_STD).unwrap();
    assert!(mask.iou(&truth).unwrap() >= 0.9);

    let img = textured_patches(160, 96, &[(16, 16, 48, 48), (96, 16, 32, 32)], 12);
    let mask = estimate_foreground(&img, DEFAULT_FG_BLOCK, DEFAULT_FG_STD).unwrap();
    assert!(mask.get(40, 40));
    assert!(!mask.get(110, 30));
}

#[test]
fn binarize_is_deterministic() {
    let img = random_gray(70, 50, &mut XorShift(99));
    let mask = estimate_foreground(&img, DEFAULT_FG_BLOCK, DEFAULT_FG_STD).unwrap();
    let p = SauvolaParams::default();
    assert_eq!(binarize(&img, &mask, &p).unwrap(), binarize(&img, &mask, &p).unwrap());
}

#[test]
fn scale_covariance() {
    let img = random_gray(64, 64, &mut XorShift(21));
    let mask = full(&img);
    let p = SauvolaParams::default();
    let base = binarize_raw(&img, &mask, &p).unwrap();
    let lambda = 0.5;
    let scaled = img.scaled(lambda);
    let same_r = binarize_raw(&scaled, &mask, &p).unwrap();
    let scaled_r = binarize_raw(&scaled, &mask, &SauvolaParams { range: p.range * lambda, ..p }).unwrap();
    assert_eq!(scaled_r, base);
    assert_ne!(same_r, base);
}

proptest! {
    #[test]
    fn threshold_increases_with_deviation(m in 1.0f64..255.0, s in 0.0f64..150.0, ds in 1e-3f64..50.0, k in 1e-3f64..0.5) {
        let p = SauvolaParams { k, ..SauvolaParams::default() };
        prop_assert!(p.threshold_from_stats(m, s + ds) > p.threshold_from_stats(m, s));
    }

    #[test]
    fn output_is_binary_and_masked(w in 1usize..40, h in 1usize..40, seed in any::<u64>(), mseed in any::<u64>()) {
        let img = random_gray(w, h, &mut XorShift(seed | 1));
        let mut rng = XorShift(mseed | 1);
        let mask = ForegroundMask::from_fn(w, h, |_, _| rng.unit() < 0.7).unwrap();
        let bm = binarize(&img, &mask, &SauvolaParams::default()).unwrap();
        for y in 0..h {
            for x in 0..w {
                let v = bm.get(x, y);
                prop_assert!(v == FOREGROUND || v == BACKGROUND);
                prop_assert!(mask.get(x, y) || v == BACKGROUND);
            }
        }
    }
}
