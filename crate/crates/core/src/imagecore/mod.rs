//! Raster primitives shared by every image-facing part of the crate.
//!
//! Intensities are kept as `f64` in `[0, 255]`; conversion to 8-bit only
//! happens in [`pgm`]. Binary maps use `0` for foreground (ridge) and `255`
//! for background.

mod components;
mod image;
pub(crate) mod integral;
mod morphology;
pub mod pgm;

pub use components::{fill_holes, label_components, largest_component, Labels};
pub use image::{foreground_ratio, BinaryMap, ForegroundMask, GrayImage, BACKGROUND, FOREGROUND, NOMINAL_PPI};
pub use integral::{build_integral, window_stats, IntegralPair};
pub use morphology::{dilate, erode, morph_open};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("invalid dimensions {width}x{height}: {reason}")]
    Dimension {
        width: usize,
        height: usize,
        reason: &'static str,
    },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    Mismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("intensity {value} at index {index} outside [0, 255]")]
    Intensity { index: usize, value: f64 },
    #[error("binary map value {value} at index {index} is neither 0 nor 255")]
    NotBinary { index: usize, value: u8 },
    #[error("malformed PGM: {0}")]
    Pgm(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl ImageError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
