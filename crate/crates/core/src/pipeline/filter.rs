use std::path::PathBuf;
use std::process::Command;

use serde::Serialize;

use super::PipelineError;
use crate::imagecore::{foreground_ratio, pgm, GrayImage};
use crate::sauvola::{estimate_foreground, DEFAULT_FG_BLOCK, DEFAULT_FG_STD};

/// Identities need strictly more foreground than this fraction.
pub const DEFAULT_FG_THRESHOLD: f64 = 0.6;
/// Quality scores must strictly exceed this.
pub const QUALITY_THRESHOLD: f64 = 0.55;

/// External quality scorer.
pub trait QualityHook: Send + Sync {
    fn name(&self) -> String;
    fn score(&self, tex: &GrayImage) -> Result<f64, PipelineError>;
}

/// Runs `program <file.pgm>` and reads one number from its stdout.
#[derive(Debug, Clone)]
pub struct CommandQualityHook {
    pub program: PathBuf,
}

impl QualityHook for CommandQualityHook {
    fn name(&self) -> String {
        self.program.display().to_string()
    }

    fn score(&self, tex: &GrayImage) -> Result<f64, PipelineError> {
        let fail = |msg: String| PipelineError::Hook { hook: self.name(), msg };
        let file = tempfile::Builder::new()
            .suffix(".pgm")
            .tempfile()
            .map_err(|e| fail(format!("temporary file: {e}")))?;
        pgm::write_gray(file.path(), tex).map_err(|e| fail(e.to_string()))?;
        let out = Command::new(&self.program)
            .arg(file.path())
            .output()
            .map_err(|e| fail(format!("spawn: {e}")))?;
        if !out.status.success() {
            return Err(fail(format!("exited with {}", out.status)));
        }
        let text = String::from_utf8_lossy(&out.stdout);
        let score: f64 = text
            .trim()
            .parse()
            .map_err(|_| fail(format!("expected a number on stdout, got {:?}", text.trim())))?;
        if !score.is_finite() {
            return Err(fail(format!("non-finite score {score}")));
        }
        Ok(score)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FilterReason {
    Foreground { ratio: f64, threshold: f64 },
    Quality { score: f64, threshold: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterOutcome {
    pub passed: bool,
    pub foreground_ratio: f64,
    pub quality: Option<f64>,
    pub reasons: Vec<FilterReason>,
}

/// Foreground test, plus the quality hook when one is given. Every failing
/// test contributes a reason.
pub fn filter_identity(
    tex: &GrayImage,
    fg_threshold: f64,
    hook: Option<&dyn QualityHook>,
) -> Result<FilterOutcome, PipelineError> {
    if !(fg_threshold > 0.0 && fg_threshold < 1.0) {
        return Err(PipelineError::Parameter(format!(
            "foreground threshold must be in (0, 1), got {fg_threshold}"
        )));
    }
    let mask = estimate_foreground(tex, DEFAULT_FG_BLOCK, DEFAULT_FG_STD)?;
    let ratio = foreground_ratio(&mask);
    let mut reasons = Vec::new();
    if ratio <= fg_threshold {
        reasons.push(FilterReason::Foreground {
            ratio,
            threshold: fg_threshold,
        });
    }
    let quality = match hook {
        Some(h) => {
            let score = h.score(tex)?;
            if score <= QUALITY_THRESHOLD {
                reasons.push(FilterReason::Quality {
                    score,
                    threshold: QUALITY_THRESHOLD,
                });
            }
            Some(score)
        }
        None => None,
    };
    Ok(FilterOutcome {
        passed: reasons.is_empty(),
        foreground_ratio: ratio,
        quality,
        reasons,
    })
}
