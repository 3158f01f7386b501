//! Deterministic core of a contactless fingerprint synthesis pipeline.
//!
//! - [`imagecore`]: rasters, summed-area statistics, components, opening, PGM I/O
//! - [`sauvola`]: identity-anchor binarization
//! - [`finger3d`]: point clouds, pose rectification, cross sections, UV unfolding
//! - [`poseproject`]: roll rotation, contact displacement, orthographic z-buffer rendering
//! - [`diffusion`]: noise schedules, forward noising, DDIM reverse steps, VQ codebooks
//! - [`pipeline`]: identity filtering, roll sweeps, batch dataset generation
//! - [`synth`]: analytic phantoms (cylinders, ridge textures) for demos and tests
//! - [`cli`]: the `fpforge` command line
//!
//! Runnable walkthroughs live in `examples/`.

pub mod cli;
pub mod diffusion;
pub mod finger3d;
pub mod imagecore;
pub mod pipeline;
pub mod poseproject;
pub mod sauvola;
pub mod synth;

/// Millimetres per inch.
pub const MM_PER_INCH: f64 = 25.4;

/// Pixels per millimetre at the given resolution.
#[inline]
pub fn px_per_mm(ppi: f64) -> f64 {
    ppi / MM_PER_INCH
}
