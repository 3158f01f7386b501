//! Sauvola local adaptive binarization producing the ridge identity anchor.
//!
//! For each pixel the local mean `m` and deviation `s` over a `w x w` window
//! give the threshold `T = m * (1 + k * (s / R - 1))`. Pixels inside the
//! foreground mask that are brighter than `T` become ridge (`0`), everything
//! else background (`255`); a 2x2 opening then removes speckle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::imagecore::{
    build_integral, fill_holes, largest_component, morph_open, BinaryMap, ForegroundMask, GrayImage,
    ImageError, IntegralPair, BACKGROUND, FOREGROUND,
};

/// Side of the square opening element applied after thresholding.
pub const OPENING_SIZE: usize = 2;

/// Default block size for [`estimate_foreground`].
pub const DEFAULT_FG_BLOCK: usize = 16;
/// Default block deviation threshold for [`estimate_foreground`].
pub const DEFAULT_FG_STD: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SauvolaParams {
    /// Window side in pixels; odd, at least 3.
    pub window: usize,
    /// Correction parameter.
    pub k: f64,
    /// Dynamic range of the deviation.
    pub range: f64,
}

impl Default for SauvolaParams {
    fn default() -> Self {
        Self {
            window: 11,
            k: 0.007,
            range: 128.0,
        }
    }
}

impl SauvolaParams {
    pub fn validate(&self) -> Result<(), ImageError> {
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(ImageError::Parameter(format!(
                "Sauvola window must be odd and >= 3, got {}",
                self.window
            )));
        }
        if !(self.range > 0.0 && self.range.is_finite()) {
            return Err(ImageError::Parameter(format!(
                "dynamic range must be positive, got {}",
                self.range
            )));
        }
        if !self.k.is_finite() {
            return Err(ImageError::Parameter(format!("k must be finite, got {}", self.k)));
        }
        Ok(())
    }

    /// Threshold for a window with the given statistics.
    #[inline]
    pub fn threshold_from_stats(&self, mean: f64, std: f64) -> f64 {
        mean * (1.0 + self.k * (std / self.range - 1.0))
    }
}

/// Threshold at a single pixel.
pub fn sauvola_threshold(ip: &IntegralPair, x: usize, y: usize, p: &SauvolaParams) -> Result<f64, ImageError> {
    p.validate()?;
    let (m, s) = crate::imagecore::window_stats(ip, x, y, p.window)?;
    Ok(p.threshold_from_stats(m, s))
}

/// Thresholds for every pixel in row-major order.
pub fn threshold_map(img: &GrayImage, p: &SauvolaParams) -> Result<Vec<f64>, ImageError> {
    p.validate()?;
    let ip = build_integral(img)?;
    let (w, h) = img.dims();
    let r = p.window / 2;
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        let (y0, y1) = (y.saturating_sub(r), (y + r + 1).min(h));
        let (top_s, top_q) = ip.rows(y0);
        let (bot_s, bot_q) = ip.rows(y1);
        let rows = (y1 - y0) as f64;
        for (x, t) in row.iter_mut().enumerate() {
            let (x0, x1) = (x.saturating_sub(r), (x + r + 1).min(w));
            let n = rows * (x1 - x0) as f64;
            let s = bot_s[x1] - bot_s[x0] - top_s[x1] + top_s[x0];
            let sq = bot_q[x1] - bot_q[x0] - top_q[x1] + top_q[x0];
            let mean = s / n;
            let std = (sq / n - mean * mean).max(0.0).sqrt();
            *t = p.threshold_from_stats(mean, std);
        }
    });
    Ok(out)
}

/// Thresholding without the final opening.
pub fn binarize_raw(img: &GrayImage, mask: &ForegroundMask, p: &SauvolaParams) -> Result<BinaryMap, ImageError> {
    if img.dims() != mask.dims() {
        return Err(ImageError::Mismatch {
            left: img.dims(),
            right: mask.dims(),
        });
    }
    let thresholds = threshold_map(img, p)?;
    let data = img
        .data()
        .iter()
        .zip(&thresholds)
        .zip(mask.data())
        .map(|((&v, &t), &inside)| if inside && v > t { FOREGROUND } else { BACKGROUND })
        .collect();
    BinaryMap::new(img.width(), img.height(), data)
}

/// Full identity-anchor rule: threshold inside the mask, then 2x2 opening.
pub fn binarize(img: &GrayImage, mask: &ForegroundMask, p: &SauvolaParams) -> Result<BinaryMap, ImageError> {
    let raw = binarize_raw(img, mask, p)?;
    morph_open(&raw, OPENING_SIZE, OPENING_SIZE)
}

/// Coarse region-of-interest estimate: blocks whose intensity deviation
/// exceeds `std_thresh`, reduced to the largest 4-connected block region
/// with enclosed holes filled.
pub fn estimate_foreground(img: &GrayImage, block: usize, std_thresh: f64) -> Result<ForegroundMask, ImageError> {
    if block < 4 {
        return Err(ImageError::Parameter(format!("block must be >= 4, got {block}")));
    }
    let (w, h) = img.dims();
    let ip = build_integral(img)?;
    let bw = w.div_ceil(block);
    let bh = h.div_ceil(block);
    let blocks = ForegroundMask::from_fn(bw, bh, |bx, by| {
        let (x0, y0) = (bx * block, by * block);
        let (x1, y1) = ((x0 + block).min(w), (y0 + block).min(h));
        let n = ((x1 - x0) * (y1 - y0)) as f64;
        let (s, sq) = ip.rect(x0, y0, x1, y1);
        let mean = s / n;
        (sq / n - mean * mean).max(0.0).sqrt() > std_thresh
    })?;
    let blocks = fill_holes(&largest_component(&blocks));
    ForegroundMask::from_fn(w, h, |x, y| blocks.get(x / block, y / block))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_variance_threshold() {
        let p = SauvolaParams::default();
        assert!((p.threshold_from_stats(100.0, 0.0) - 99.3).abs() < 1e-12);
        assert_eq!(p.threshold_from_stats(128.0, 128.0), 128.0);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SauvolaParams { window: 10, ..Default::default() }.validate().is_err());
        assert!(SauvolaParams { range: 0.0, ..Default::default() }.validate().is_err());
        assert!(SauvolaParams { k: f64::NAN, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn constant_image_becomes_all_ridge() {
        let img = GrayImage::filled(20, 20, 90.0).unwrap();
        let mask = ForegroundMask::filled(20, 20, true).unwrap();
        let bm = binarize(&img, &mask, &SauvolaParams::default()).unwrap();
        assert_eq!(bm.foreground_count(), 400);
    }

    #[test]
    fn empty_mask_gives_background() {
        let img = GrayImage::from_fn(16, 16, |x, y| ((x * 37 + y * 11) % 256) as f64).unwrap();
        let mask = ForegroundMask::filled(16, 16, false).unwrap();
        let bm = binarize(&img, &mask, &SauvolaParams::default()).unwrap();
        assert!(bm.data().iter().all(|&v| v == BACKGROUND));
    }

    #[test]
    fn mask_size_mismatch() {
        let img = GrayImage::filled(4, 4, 1.0).unwrap();
        let mask = ForegroundMask::filled(4, 5, true).unwrap();
        assert!(matches!(
            binarize(&img, &mask, &SauvolaParams::default()),
            Err(ImageError::Mismatch { .. })
        ));
    }

    #[test]
    fn constant_image_has_no_foreground_region() {
        let img = GrayImage::filled(64, 64, 200.0).unwrap();
        let m = estimate_foreground(&img, 16, 8.0).unwrap();
        assert_eq!(m.count(), 0);
        assert!(estimate_foreground(&img, 3, 8.0).is_err());
    }
}
