//! Dataset generation: identity filtering, roll sweeps and batch rendering.

mod batch;
mod filter;
mod sweep;

pub use batch::{
    load_batch_input, run_batch, theta_file_name, BatchCounts, BatchInput, BatchSpec, FilterStats, IdentityInput,
    IdentityRecord, Manifest, RenderRecord, FORMAT_VERSION, WORKERS_ENV,
};
pub use filter::{
    filter_identity, CommandQualityHook, FilterOutcome, FilterReason, QualityHook, DEFAULT_FG_THRESHOLD,
    QUALITY_THRESHOLD,
};
pub use sweep::{identity_seed, plan_sweep, SweepSpec};

use std::path::PathBuf;

use thiserror::Error;

use crate::finger3d::GeometryError;
use crate::imagecore::ImageError;
use crate::poseproject::ProjectError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("quality hook {hook}: {msg}")]
    Hook { hook: String, msg: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Project(#[from] ProjectError),
}

impl PipelineError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
