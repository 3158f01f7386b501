//! Finger point clouds and their geodesic UV unfolding.
//!
//! Clouds are expressed in millimetres with `y` along the finger (tip toward
//! `+y`), `x` across it and `z` toward the camera. Each cross-section slab is
//! unrolled into a signed arc-length coordinate `u` measured from the `x = 0`
//! plane; `v` is the longitudinal coordinate. Both are stored in pixels at
//! the surface resolution.

mod cloud;
pub mod io;
mod rectify;
mod section;
mod unfold;
pub mod uvmap;

pub use cloud::FingerPointCloud;
pub use rectify::{rectify_pose, rectify_pose_with_transform, RigidTransform};
pub use section::{slice_sections, smoothed_normals, CrossSection, DEFAULT_SLAB_MM, MIN_SECTION_POINTS};
pub use unfold::{bilinear_sample, sample_texture, unfold_cloud, unfold_to_uv, UnfoldedSurface, UvBounds, MIN_UNFOLD_POINTS};

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate in point {0}")]
    NonFinite(usize),
    #[error("degenerate cloud: {0}")]
    Degenerate(String),
    #[error("no cross-section kept {0}")]
    EmptySections(String),
    #[error("cloud has {got} points, at least {need} required")]
    TooFewPoints { got: usize, need: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("malformed UV map: {0}")]
    UvMap(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl GeometryError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
