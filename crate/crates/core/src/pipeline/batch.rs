use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{filter_identity, identity_seed, plan_sweep, FilterOutcome, FilterReason, PipelineError, QualityHook, SweepSpec};
use crate::finger3d::{io::read_cloud, rectify_pose, unfold_cloud, DEFAULT_SLAB_MM};
use crate::imagecore::{foreground_ratio, pgm, NOMINAL_PPI};
use crate::poseproject::{render_pose, Canvas};

/// Version of the manifest and record layout.
pub const FORMAT_VERSION: u32 = 1;
/// Default worker count when no flag is given.
pub const WORKERS_ENV: &str = "FPFORGE_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityInput {
    pub identity_id: String,
    pub texture_path: PathBuf,
    pub cloud_path: PathBuf,
    /// Skip PCA rectification for clouds already in the finger frame.
    #[serde(default)]
    pub rectified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchInput {
    pub identities: Vec<IdentityInput>,
}

/// Reads a batch description; relative paths are resolved against the
/// file's directory.
pub fn load_batch_input(path: &Path) -> Result<BatchInput, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    let mut input: BatchInput = serde_json::from_str(&text)?;
    let base = path.parent().unwrap_or(Path::new(""));
    for id in &mut input.identities {
        if id.texture_path.is_relative() {
            id.texture_path = base.join(&id.texture_path);
        }
        if id.cloud_path.is_relative() {
            id.cloud_path = base.join(&id.cloud_path);
        }
    }
    Ok(input)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSpec {
    pub sweep: SweepSpec,
    pub seed: u64,
    pub fg_threshold: f64,
    pub canvas: Canvas,
    pub slab_mm: f64,
    pub workers: usize,
}

impl Default for BatchSpec {
    fn default() -> Self {
        Self {
            sweep: SweepSpec::default(),
            seed: 0,
            fg_threshold: super::DEFAULT_FG_THRESHOLD,
            canvas: Canvas::default(),
            slab_mm: DEFAULT_SLAB_MM,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenderRecord {
    pub theta: f64,
    /// Relative to the batch output directory.
    pub image_path: String,
    /// Pixels.
    pub delta_u: f64,
    /// Share of the canvas covered by the rendered finger.
    pub foreground_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityRecord {
    pub identity_id: String,
    pub texture_path: String,
    pub cloud_path: String,
    pub passed_filter: bool,
    pub filter: Option<FilterOutcome>,
    pub renders: Vec<RenderRecord>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BatchCounts {
    pub identities: usize,
    pub passed: usize,
    pub filtered: usize,
    pub failed: usize,
    pub images: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FilterStats {
    pub foreground_failures: usize,
    pub quality_failures: usize,
    pub mean_foreground_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub format_version: u32,
    pub spec: BatchSpec,
    pub counts: BatchCounts,
    pub filter_stats: FilterStats,
    pub identities: Vec<IdentityRecord>,
}

/// `12.pgm`, `-7.pgm`, `0.pgm`; non-integral angles keep three decimals.
pub fn theta_file_name(theta: f64) -> String {
    if theta.fract() == 0.0 {
        format!("{}.pgm", theta as i64)
    } else {
        format!("{theta:.3}.pgm")
    }
}

fn safe_identity(id: &str) -> bool {
    !id.is_empty()
        && id != "."
        && id != ".."
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), PipelineError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| PipelineError::io(path, e))
}

fn render_identity(
    input: &IdentityInput,
    spec: &BatchSpec,
    out_dir: &Path,
    hook: Option<&dyn QualityHook>,
    record: &mut IdentityRecord,
) -> Result<(), PipelineError> {
    if !safe_identity(&input.identity_id) {
        return Err(PipelineError::Parameter(format!(
            "identity id {:?} is not a plain file name",
            input.identity_id
        )));
    }
    let tex = pgm::read_gray(&input.texture_path)?;
    let outcome = filter_identity(&tex, spec.fg_threshold, hook)?;
    record.passed_filter = outcome.passed;
    let passed = outcome.passed;
    record.filter = Some(outcome);
    if !passed {
        return Ok(());
    }
    let cloud = read_cloud(&input.cloud_path)?;
    let cloud = if input.rectified { cloud } else { rectify_pose(&cloud)? };
    let surface = unfold_cloud(&cloud, spec.slab_mm, NOMINAL_PPI)?;
    let poses = plan_sweep(&spec.sweep, identity_seed(spec.seed, &input.identity_id))?;
    let dir = out_dir.join(&input.identity_id);
    fs::create_dir_all(&dir).map_err(|e| PipelineError::io(&dir, e))?;
    for pose in poses {
        let out = render_pose(&surface, &tex, pose, spec.canvas)?;
        let name = theta_file_name(pose.degrees());
        pgm::write_gray(dir.join(&name), &out.img)?;
        record.renders.push(RenderRecord {
            theta: pose.degrees(),
            image_path: format!("{}/{name}", input.identity_id),
            delta_u: out.delta_u,
            foreground_ratio: foreground_ratio(&out.visibility_mask),
        });
    }
    record.renders.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(())
}

fn process_identity(
    input: &IdentityInput,
    spec: &BatchSpec,
    out_dir: &Path,
    hook: Option<&dyn QualityHook>,
) -> IdentityRecord {
    let mut record = IdentityRecord {
        identity_id: input.identity_id.clone(),
        texture_path: input.texture_path.display().to_string(),
        cloud_path: input.cloud_path.display().to_string(),
        passed_filter: false,
        filter: None,
        renders: Vec::new(),
        error: None,
    };
    if let Err(e) = render_identity(input, spec, out_dir, hook, &mut record) {
        warn!("identity {}: {e}", input.identity_id);
        record.error = Some(e.to_string());
    }
    if !record.renders.is_empty() {
        let path = out_dir.join(&input.identity_id).join("record.json");
        if let Err(e) = write_json(&path, &record) {
            record.error.get_or_insert(e.to_string());
        }
    }
    record
}

/// Filters and renders every identity, then writes `manifest.json` to
/// `out_dir`. Per-identity failures are recorded in the manifest; only an
/// unusable output directory aborts the batch.
pub fn run_batch(
    inputs: &[IdentityInput],
    spec: &BatchSpec,
    out_dir: &Path,
    hook: Option<&dyn QualityHook>,
) -> Result<Manifest, PipelineError> {
    spec.sweep.validate()?;
    if spec.workers == 0 {
        return Err(PipelineError::Parameter("workers must be at least 1".into()));
    }
    if !(spec.fg_threshold > 0.0 && spec.fg_threshold < 1.0) {
        return Err(PipelineError::Parameter(format!(
            "foreground threshold must be in (0, 1), got {}",
            spec.fg_threshold
        )));
    }
    fs::create_dir_all(out_dir).map_err(|e| PipelineError::io(out_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| PipelineError::Parameter(format!("worker pool: {e}")))?;
    let records: Vec<IdentityRecord> =
        pool.install(|| inputs.par_iter().map(|i| process_identity(i, spec, out_dir, hook)).collect());

    let mut counts = BatchCounts {
        identities: records.len(),
        ..Default::default()
    };
    let mut stats = FilterStats::default();
    let mut ratios = Vec::new();
    for r in &records {
        counts.images += r.renders.len();
        if r.error.is_some() {
            counts.failed += 1;
        } else if r.passed_filter {
            counts.passed += 1;
        } else {
            counts.filtered += 1;
        }
        if let Some(f) = &r.filter {
            ratios.push(f.foreground_ratio);
            for reason in &f.reasons {
                match reason {
                    FilterReason::Foreground { .. } => stats.foreground_failures += 1,
                    FilterReason::Quality { .. } => stats.quality_failures += 1,
                }
            }
        }
    }
    if !ratios.is_empty() {
        stats.mean_foreground_ratio = Some(ratios.iter().sum::<f64>() / ratios.len() as f64);
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        format_version: FORMAT_VERSION,
        spec: spec.clone(),
        counts,
        filter_stats: stats,
        identities: records,
    };
    write_json(&out_dir.join("manifest.json"), &manifest)?;
    info!(
        "batch done: {} passed, {} filtered, {} failed, {} images",
        manifest.counts.passed, manifest.counts.filtered, manifest.counts.failed, manifest.counts.images
    );
    Ok(manifest)
}
