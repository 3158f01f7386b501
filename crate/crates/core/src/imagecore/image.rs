use super::ImageError;

/// Standard fingerprint resolution.
pub const NOMINAL_PPI: f64 = 500.0;

/// Ridge value in a [`BinaryMap`].
pub const FOREGROUND: u8 = 0;
/// Background value in a [`BinaryMap`].
pub const BACKGROUND: u8 = 255;

fn check_dims(width: usize, height: usize, len: usize) -> Result<(), ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::Dimension {
            width,
            height,
            reason: "image must be non-empty",
        });
    }
    if width.checked_mul(height) != Some(len) {
        return Err(ImageError::Dimension {
            width,
            height,
            reason: "data length does not match width x height",
        });
    }
    Ok(())
}

/// Row-major grayscale raster with real-valued intensities in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
    ppi: f64,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self, ImageError> {
        check_dims(width, height, data.len())?;
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=255.0).contains(*v))
        {
            return Err(ImageError::Intensity { index, value });
        }
        Ok(Self {
            width,
            height,
            data,
            ppi: NOMINAL_PPI,
        })
    }

    /// Constant image.
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self, ImageError> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel; results are
    /// clamped into `[0, 255]`.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, ImageError> {
        let mut data = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y).clamp(0.0, 255.0));
            }
        }
        Self::new(width, height, data)
    }

    pub fn with_ppi(mut self, ppi: f64) -> Self {
        self.ppi = ppi;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn ppi(&self) -> f64 {
        self.ppi
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Multiplies every intensity by `factor`, clamping into range.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            data: self.data.iter().map(|v| (v * factor).clamp(0.0, 255.0)).collect(),
            ..self.clone()
        }
    }
}

/// Ridge/background map holding only [`FOREGROUND`] and [`BACKGROUND`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMap {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl BinaryMap {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImageError> {
        check_dims(width, height, data.len())?;
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|(_, v)| **v != FOREGROUND && **v != BACKGROUND)
        {
            return Err(ImageError::NotBinary { index, value });
        }
        Ok(Self { width, height, data })
    }

    pub fn background(width: usize, height: usize) -> Result<Self, ImageError> {
        Self::new(width, height, vec![BACKGROUND; width.saturating_mul(height)])
    }

    /// Map where `is_fg(x, y)` selects the foreground pixels.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut is_fg: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, ImageError> {
        let mut data = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                data.push(if is_fg(x, y) { FOREGROUND } else { BACKGROUND });
            }
        }
        Self::new(width, height, data)
    }

    pub(crate) fn from_raw_unchecked(width: usize, height: usize, data: Vec<u8>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn is_foreground(&self, x: usize, y: usize) -> bool {
        self.get(x, y) == FOREGROUND
    }

    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&v| v == FOREGROUND).count()
    }

    /// Foreground pixels as a mask.
    pub fn to_mask(&self) -> ForegroundMask {
        ForegroundMask {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| v == FOREGROUND).collect(),
        }
    }
}

/// Boolean region-of-interest mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForegroundMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl ForegroundMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self, ImageError> {
        check_dims(width, height, data.len())?;
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Result<Self, ImageError> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, ImageError> {
        let mut data = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.data[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    /// Intersection-over-union against another mask of the same size.
    pub fn iou(&self, other: &ForegroundMask) -> Result<f64, ImageError> {
        if self.dims() != other.dims() {
            return Err(ImageError::Mismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        let (mut inter, mut union) = (0usize, 0usize);
        for (&a, &b) in self.data.iter().zip(&other.data) {
            inter += (a && b) as usize;
            union += (a || b) as usize;
        }
        Ok(if union == 0 { 1.0 } else { inter as f64 / union as f64 })
    }
}

/// Fraction of `true` pixels in the mask.
pub fn foreground_ratio(mask: &ForegroundMask) -> f64 {
    mask.count() as f64 / (mask.width * mask.height) as f64
}
