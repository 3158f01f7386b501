mod common;

use common::{naive_dilate, naive_erode, naive_open, random_binary, random_gray, XorShift};
use fpforge::imagecore::pgm::{decode_binary, decode_gray, encode_binary, encode_gray};
use fpforge::imagecore::{
    build_integral, dilate, erode, fill_holes, foreground_ratio, largest_component, morph_open, window_stats, BinaryMap,
    ForegroundMask, GrayImage, BACKGROUND, FOREGROUND,
};
use proptest::prelude::*;

fn naive_rect(img: &GrayImage, x0: usize, y0: usize, x1: usize, y1: usize) -> (f64, f64) {
    let (mut s, mut q) = (0.0, 0.0);
    for y in y0..y1 {
        for x in x0..x1 {
            let v = img.get(x, y);
            s += v;
            q += v * v;
        }
    }
    (s, q)
}

fn naive_stats(img: &GrayImage, x: usize, y: usize, w: usize) -> (f64, f64) {
    let r = w / 2;
    let (x0, y0) = (x.saturating_sub(r), y.saturating_sub(r));
    let (x1, y1) = ((x + r + 1).min(img.width()), (y + r + 1).min(img.height()));
    let n = ((x1 - x0) * (y1 - y0)) as f64;
    let (s, _) = naive_rect(img, x0, y0, x1, y1);
    let m = s / n;
    let mut ss = 0.0;
    for yy in y0..y1 {
        for xx in x0..x1 {
            ss += (img.get(xx, yy) - m).powi(2);
        }
    }
    (m, (ss / n).sqrt())
}

fn gray_from_seed(w: usize, h: usize, seed: u64) -> GrayImage {
    random_gray(w, h, &mut XorShift(seed | 1))
}

#[test]
fn single_pixel_rect() {
    let img = GrayImage::new(1, 1, vec![5.0]).unwrap();
    assert_eq!(build_integral(&img).unwrap().rect(0, 0, 1, 1), (5.0, 25.0));
}

#[test]
fn constant_field_window_sums() {
    let c = 9.0;
    let ip = build_integral(&GrayImage::filled(4, 4, c).unwrap()).unwrap();
    for k in 1..=4 {
        for y in 0..=4 - k {
            for x in 0..=4 - k {
                assert_eq!(ip.rect(x, y, x + k, y + k).0, (k * k) as f64 * c);
            }
        }
    }
}

#[test]
fn random_16_window_sums_match_double_loop() {
    let img = gray_from_seed(16, 16, 7);
    let ip = build_integral(&img).unwrap();
    for y0 in 0..16 {
        for x0 in 0..16 {
            for (x1, y1) in [(x0 + 1, y0 + 1), (16, 16), ((x0 + 5).min(16), (y0 + 3).min(16))] {
                let (s, q) = ip.rect(x0, y0, x1, y1);
                let (ns, nq) = naive_rect(&img, x0, y0, x1, y1);
                assert!((s - ns).abs() <= 1e-9 && (q - nq).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn window_stats_examples() {
    let flat = build_integral(&GrayImage::filled(9, 9, 7.0).unwrap()).unwrap();
    assert_eq!(window_stats(&flat, 0, 4, 5).unwrap(), (7.0, 0.0));

    let ramp = GrayImage::new(3, 3, (0..9).map(f64::from).collect()).unwrap();
    let (m, s) = window_stats(&build_integral(&ramp).unwrap(), 1, 1, 3).unwrap();
    assert!((m - 4.0).abs() < 1e-12);
    assert!((s - (60.0f64 / 9.0).sqrt()).abs() < 1e-12);

    let img = gray_from_seed(8, 8, 3);
    let got = window_stats(&build_integral(&img).unwrap(), 0, 0, 11).unwrap();
    let want = naive_stats(&img, 0, 0, 11);
    assert!((got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9);

    assert!(window_stats(&flat, 0, 0, 4).is_err());
}

#[test]
fn empty_image_has_no_integral() {
    assert!(GrayImage::new(0, 0, vec![]).map_or(true, |img| build_integral(&img).is_err()));
}

#[test]
fn opening_examples() {
    let empty = BinaryMap::background(6, 6).unwrap();
    assert_eq!(morph_open(&empty, 2, 2).unwrap(), empty);

    let speck = BinaryMap::from_fn(6, 6, |x, y| x == 3 && y == 2).unwrap();
    assert_eq!(morph_open(&speck, 2, 2).unwrap(), empty);

    let block = BinaryMap::from_fn(8, 8, |x, y| (2..6).contains(&x) && (2..6).contains(&y)).unwrap();
    assert_eq!(morph_open(&block, 2, 2).unwrap(), block);
    assert_eq!(naive_open(&block, 2, 2), block);
}

#[test]
fn foreground_ratio_counts() {
    assert_eq!(foreground_ratio(&ForegroundMask::filled(5, 4, true).unwrap()), 1.0);
    assert_eq!(foreground_ratio(&ForegroundMask::filled(5, 4, false).unwrap()), 0.0);
    let m = ForegroundMask::from_fn(10, 10, |x, y| y * 10 + x < 37).unwrap();
    assert!((foreground_ratio(&m) - 0.37).abs() < 1e-15);
}

#[test]
fn components_and_holes() {
    let two = ForegroundMask::from_fn(12, 6, |x, y| (x < 2 && y < 2) || (x >= 5 && (1..5).contains(&y))).unwrap();
    let kept = largest_component(&two);
    assert_eq!(kept.count(), 7 * 4);
    assert!(!kept.get(0, 0));

    let ring = ForegroundMask::from_fn(7, 7, |x, y| (1..6).contains(&x) && (1..6).contains(&y) && !(x == 3 && y == 3)).unwrap();
    let filled = fill_holes(&ring);
    assert!(filled.get(3, 3));
    assert_eq!(filled.count(), 25);
}

proptest! {
    #[test]
    fn full_query_is_the_pixel_sum(w in 1usize..24, h in 1usize..24, seed in any::<u64>()) {
        let img = gray_from_seed(w, h, seed);
        let ip = build_integral(&img).unwrap();
        let (s, q) = naive_rect(&img, 0, 0, w, h);
        prop_assert_eq!(ip.rect(0, 0, w, h), (s, q));
    }

    #[test]
    fn tables_are_monotone(w in 1usize..20, h in 1usize..20, seed in any::<u64>()) {
        let ip = build_integral(&gray_from_seed(w, h, seed)).unwrap();
        for y in 0..=h {
            for x in 0..=w {
                if x > 0 {
                    prop_assert!(ip.sum_at(x, y) >= ip.sum_at(x - 1, y));
                    prop_assert!(ip.sumsq_at(x, y) >= ip.sumsq_at(x - 1, y));
                }
                if y > 0 {
                    prop_assert!(ip.sum_at(x, y) >= ip.sum_at(x, y - 1));
                    prop_assert!(ip.sumsq_at(x, y) >= ip.sumsq_at(x, y - 1));
                }
            }
        }
    }

    #[test]
    fn window_stats_match_naive(w in 1usize..20, h in 1usize..20, half in 1usize..7, seed in any::<u64>()) {
        let img = gray_from_seed(w, h, seed);
        let ip = build_integral(&img).unwrap();
        let win = 2 * half + 1;
        for y in 0..h {
            for x in 0..w {
                let (m, s) = window_stats(&ip, x, y, win).unwrap();
                let (nm, ns) = naive_stats(&img, x, y, win);
                prop_assert!((m - nm).abs() <= 1e-6 && (s - ns).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn morphology_matches_pixelwise_oracle(w in 1usize..16, h in 1usize..16, sw in 1usize..4, sh in 1usize..4, density in 0.0f64..1.0, seed in any::<u64>()) {
        let bm = random_binary(w, h, density, &mut XorShift(seed | 1));
        prop_assert_eq!(erode(&bm, sw, sh).unwrap(), naive_erode(&bm, sw, sh));
        prop_assert_eq!(dilate(&bm, sw, sh).unwrap(), naive_dilate(&bm, sw, sh));
        prop_assert_eq!(morph_open(&bm, sw, sh).unwrap(), naive_open(&bm, sw, sh));
    }

    #[test]
    fn opening_is_idempotent_and_anti_extensive(w in 1usize..24, h in 1usize..24, density in 0.0f64..1.0, seed in any::<u64>()) {
        let bm = random_binary(w, h, density, &mut XorShift(seed | 1));
        let once = morph_open(&bm, 2, 2).unwrap();
        prop_assert_eq!(&morph_open(&once, 2, 2).unwrap(), &once);
        for y in 0..h {
            for x in 0..w {
                prop_assert!(!once.is_foreground(x, y) || bm.is_foreground(x, y));
            }
        }
    }

    #[test]
    fn pgm_round_trip_is_bit_exact(w in 1usize..20, h in 1usize..20, seed in any::<u64>()) {
        let img = gray_from_seed(w, h, seed);
        let back = decode_gray(&encode_gray(&img)).unwrap();
        prop_assert_eq!(back.data(), img.data());
        let bm = random_binary(w, h, 0.5, &mut XorShift(seed | 1));
        let back = decode_binary(&encode_binary(&bm)).unwrap();
        prop_assert_eq!(back.data(), bm.data());
        prop_assert!(back.data().iter().all(|&v| v == FOREGROUND || v == BACKGROUND));
    }
}
