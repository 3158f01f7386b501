//! Roll-pose simulation.
//!
//! A pose is a rigid rotation about the finger's `y` axis. Positive angles
//! follow the right-hand rule about `+y`, so the `-x` flank turns toward the
//! camera on `+z` and material with negative `u` rolls onto the contact line.
//! The rendered projection is shifted by the contact displacement `delta_u`
//! so that the contact line keeps its own `u` column and the rolled view
//! stays registered to the unrolled (standard) fingerprint frame.

mod delta;
mod raster;

pub use delta::{compute_delta_u, section_delta_u_mm, DeltaUMethod, DeltaUReport};
pub use raster::{project, render_pose, splat_position, Canvas, ProjectedImage, TexturedCloud, HOLE_FILL_RADIUS};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finger3d::{FingerPointCloud, GeometryError};
use crate::imagecore::ImageError;

/// Largest supported roll magnitude, degrees.
pub const MAX_ROLL_DEG: f64 = 60.0;

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error("roll angle {0} deg outside [-60, 60]")]
    Pose(f64),
    #[error("no visible arc on the reference section at {theta_deg} deg")]
    Visibility { theta_deg: f64 },
    #[error("surface has no reference section")]
    NoReference,
    #[error("projection spans columns {col_min}..={col_max}, rows {row_min}..={row_max}; canvas is {width}x{height}")]
    Bounds {
        col_min: i64,
        col_max: i64,
        row_min: i64,
        row_max: i64,
        width: usize,
        height: usize,
    },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Roll angle in degrees, limited to `[-60, 60]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RollPose(f64);

impl RollPose {
    pub const FRONTAL: RollPose = RollPose(0.0);

    pub fn new(theta_deg: f64) -> Result<Self, ProjectError> {
        if !theta_deg.is_finite() || theta_deg.abs() > MAX_ROLL_DEG {
            return Err(ProjectError::Pose(theta_deg));
        }
        Ok(Self(theta_deg))
    }

    pub fn degrees(&self) -> f64 {
        self.0
    }

    pub fn radians(&self) -> f64 {
        self.0.to_radians()
    }
}

impl TryFrom<f64> for RollPose {
    type Error = ProjectError;

    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<RollPose> for f64 {
    fn from(p: RollPose) -> f64 {
        p.0
    }
}

/// Rotation by `theta` radians about `+y` (right-hand rule).
pub fn roll_matrix(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Rotates a cloud about `+y` by an arbitrary angle in radians.
pub fn rotate_about_y(pc: &FingerPointCloud, theta: f64) -> FingerPointCloud {
    pc.transformed(&roll_matrix(theta), &Vector3::zeros())
}

pub fn rotate_cloud(pc: &FingerPointCloud, pose: RollPose) -> FingerPointCloud {
    rotate_about_y(pc, pose.radians())
}
