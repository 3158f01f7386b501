//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use fpforge::imagecore::{BinaryMap, GrayImage, BACKGROUND, FOREGROUND};
use nalgebra::Vector3;

/// Sauvola threshold by direct summation over the clipped window, with a
/// two-pass variance.
pub fn naive_threshold(img: &GrayImage, x: usize, y: usize, w: usize, k: f64, range: f64) -> f64 {
    let r = w / 2;
    let (x0, x1) = (x.saturating_sub(r), (x + r).min(img.width() - 1));
    let (y0, y1) = (y.saturating_sub(r), (y + r).min(img.height() - 1));
    let n = ((x1 - x0 + 1) * (y1 - y0 + 1)) as f64;
    let mut sum = 0.0;
    for yy in y0..=y1 {
        for xx in x0..=x1 {
            sum += img.get(xx, yy);
        }
    }
    let m = sum / n;
    let mut ss = 0.0;
    for yy in y0..=y1 {
        for xx in x0..=x1 {
            let d = img.get(xx, yy) - m;
            ss += d * d;
        }
    }
    m * (1.0 + k * ((ss / n).sqrt() / range - 1.0))
}

fn fg(bm: &BinaryMap, x: i64, y: i64) -> bool {
    x >= 0 && y >= 0 && (x as usize) < bm.width() && (y as usize) < bm.height() && bm.is_foreground(x as usize, y as usize)
}

fn from_pred(w: usize, h: usize, f: impl Fn(i64, i64) -> bool) -> BinaryMap {
    let data = (0..w * h)
        .map(|i| if f((i % w) as i64, (i / w) as i64) { FOREGROUND } else { BACKGROUND })
        .collect();
    BinaryMap::new(w, h, data).unwrap()
}

/// Anchor survives when every pixel of the top-left anchored element is foreground.
pub fn naive_erode(bm: &BinaryMap, sw: usize, sh: usize) -> BinaryMap {
    from_pred(bm.width(), bm.height(), |x, y| {
        (0..sh as i64).all(|j| (0..sw as i64).all(|i| fg(bm, x + i, y + j)))
    })
}

/// Pixel is covered by an element placed at some foreground anchor.
pub fn naive_dilate(bm: &BinaryMap, sw: usize, sh: usize) -> BinaryMap {
    from_pred(bm.width(), bm.height(), |x, y| {
        (0..sh as i64).any(|j| (0..sw as i64).any(|i| fg(bm, x - i, y - j)))
    })
}

pub fn naive_open(bm: &BinaryMap, sw: usize, sh: usize) -> BinaryMap {
    naive_dilate(&naive_erode(bm, sw, sh), sw, sh)
}

/// Exhaustive nearest neighbour, smallest index on ties.
pub fn brute_nearest(entries: &[Vec<f64>], v: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, e) in entries.iter().enumerate() {
        let d: f64 = e.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Mean nearest-neighbour distance, via a uniform hash grid of cell size `cell`.
pub fn mean_nn_spacing(points: &[Vector3<f64>], cell: f64) -> f64 {
    let key = |p: &Vector3<f64>| {
        ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64, (p.z / cell).floor() as i64)
    };
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }
    let mut total = 0.0;
    for (i, p) in points.iter().enumerate() {
        let (kx, ky, kz) = key(p);
        let mut best = f64::INFINITY;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = grid.get(&(kx + dx, ky + dy, kz + dz)) {
                        for &j in ids {
                            let d = (points[j] - p).norm();
                            if j != i && d > 0.0 && d < best {
                                best = d;
                            }
                        }
                    }
                }
            }
        }
        assert!(best.is_finite(), "cell {cell} too small for point {i}");
        total += best;
    }
    total / points.len() as f64
}

/// Deterministic xorshift for test inputs that must not depend on the library RNG.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

pub fn random_gray(w: usize, h: usize, rng: &mut XorShift) -> GrayImage {
    let data = (0..w * h).map(|_| (rng.unit() * 255.0).round()).collect();
    GrayImage::new(w, h, data).unwrap()
}

pub fn random_binary(w: usize, h: usize, density: f64, rng: &mut XorShift) -> BinaryMap {
    let data = (0..w * h)
        .map(|_| if rng.unit() < density { FOREGROUND } else { BACKGROUND })
        .collect();
    BinaryMap::new(w, h, data).unwrap()
}
