//! Summed-area tables of intensity and squared intensity.

use super::{GrayImage, ImageError};

/// Paired summed-area tables, each `(width + 1) x (height + 1)` with a zero
/// first row and column, so `sum[(y, x)]` is the total over `[0, x) x [0, y)`.
#[derive(Debug, Clone)]
pub struct IntegralPair {
    width: usize,
    height: usize,
    sum: Vec<f64>,
    sumsq: Vec<f64>,
}

/// Builds both tables in one pass.
pub fn build_integral(img: &GrayImage) -> Result<IntegralPair, ImageError> {
    let (width, height) = img.dims();
    if width == 0 || height == 0 {
        return Err(ImageError::Dimension {
            width,
            height,
            reason: "integral image of an empty raster",
        });
    }
    let stride = width + 1;
    let mut sum = vec![0.0; stride * (height + 1)];
    let mut sumsq = vec![0.0; stride * (height + 1)];
    for (y, px) in img.data().chunks_exact(width).enumerate() {
        let (above_s, cur_s) = sum[y * stride..(y + 2) * stride].split_at_mut(stride);
        let (above_q, cur_q) = sumsq[y * stride..(y + 2) * stride].split_at_mut(stride);
        let mut row = 0.0;
        let mut row_sq = 0.0;
        for x in 0..width {
            let v = px[x];
            row += v;
            row_sq += v * v;
            cur_s[x + 1] = above_s[x + 1] + row;
            cur_q[x + 1] = above_q[x + 1] + row_sq;
        }
    }
    Ok(IntegralPair {
        width,
        height,
        sum,
        sumsq,
    })
}

impl IntegralPair {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    fn at(table: &[f64], stride: usize, x: usize, y: usize) -> f64 {
        table[y * stride + x]
    }

    /// Sum and squared sum over the half-open rectangle `[x0, x1) x [y0, y1)`.
    /// Bounds are clamped to the image.
    #[inline]
    pub fn rect(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> (f64, f64) {
        let x1 = x1.min(self.width);
        let y1 = y1.min(self.height);
        if x0 >= x1 || y0 >= y1 {
            return (0.0, 0.0);
        }
        let s = self.width + 1;
        let q = |t: &[f64]| {
            Self::at(t, s, x1, y1) - Self::at(t, s, x0, y1) - Self::at(t, s, x1, y0)
                + Self::at(t, s, x0, y0)
        };
        (q(&self.sum), q(&self.sumsq))
    }

    /// Raw table entry `sum[(y, x)]`, for monotonicity checks.
    pub fn sum_at(&self, x: usize, y: usize) -> f64 {
        self.sum[y * (self.width + 1) + x]
    }

    /// Row `y` of both tables, `width + 1` entries each.
    #[inline]
    pub(crate) fn rows(&self, y: usize) -> (&[f64], &[f64]) {
        let s = self.width + 1;
        (&self.sum[y * s..(y + 1) * s], &self.sumsq[y * s..(y + 1) * s])
    }

    pub fn sumsq_at(&self, x: usize, y: usize) -> f64 {
        self.sumsq[y * (self.width + 1) + x]
    }
}

/// Mean and standard deviation over the `w x w` window centred at `(x, y)`,
/// clipped to the image. The divisor is the clipped pixel count.
pub fn window_stats(ip: &IntegralPair, x: usize, y: usize, w: usize) -> Result<(f64, f64), ImageError> {
    if w < 3 || w.is_multiple_of(2) {
        return Err(ImageError::Parameter(format!(
            "window size must be odd and >= 3, got {w}"
        )));
    }
    if x >= ip.width || y >= ip.height {
        return Err(ImageError::Parameter(format!(
            "pixel ({x}, {y}) outside {}x{} image",
            ip.width, ip.height
        )));
    }
    Ok(window_stats_unchecked(ip, x, y, w / 2))
}

#[inline]
pub(crate) fn window_stats_unchecked(ip: &IntegralPair, x: usize, y: usize, r: usize) -> (f64, f64) {
    let x0 = x.saturating_sub(r);
    let y0 = y.saturating_sub(r);
    let x1 = (x + r + 1).min(ip.width);
    let y1 = (y + r + 1).min(ip.height);
    let n = ((x1 - x0) * (y1 - y0)) as f64;
    let (s, sq) = ip.rect(x0, y0, x1, y1);
    let mean = s / n;
    let var = (sq / n - mean * mean).max(0.0);
    (mean, var.sqrt())
}
