use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::poseproject::{RollPose, MAX_ROLL_DEG};

/// Roll angles rendered per identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub n_positive: usize,
    pub n_negative: usize,
    /// Degrees.
    pub max_angle: f64,
    pub include_frontal: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            n_positive: 4,
            n_negative: 4,
            max_angle: MAX_ROLL_DEG,
            include_frontal: true,
        }
    }
}

impl SweepSpec {
    pub fn total(&self) -> usize {
        self.n_positive + self.n_negative + usize::from(self.include_frontal)
    }

    /// Whole degrees available on each side, `1..=floor(max_angle)`.
    pub fn grid_size(&self) -> usize {
        self.max_angle.floor() as usize
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(self.max_angle >= 1.0 && self.max_angle <= MAX_ROLL_DEG) {
            return Err(PipelineError::Parameter(format!(
                "max_angle must be in [1, {MAX_ROLL_DEG}], got {}",
                self.max_angle
            )));
        }
        let grid = self.grid_size();
        for (side, n) in [("positive", self.n_positive), ("negative", self.n_negative)] {
            if n > grid {
                return Err(PipelineError::Parameter(format!(
                    "{n} {side} angles requested but only {grid} grid angles exist"
                )));
            }
        }
        Ok(())
    }
}

/// FNV-1a of the identity folded into the batch seed.
pub fn identity_seed(seed: u64, identity: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in identity.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    seed ^ h
}

/// Frontal pose first (when included), then the sampled angles ascending.
pub fn plan_sweep(spec: &SweepSpec, seed: u64) -> Result<Vec<RollPose>, PipelineError> {
    spec.validate()?;
    let grid = spec.grid_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles: Vec<f64> = sample(&mut rng, grid, spec.n_positive)
        .into_iter()
        .map(|i| (i + 1) as f64)
        .collect();
    angles.extend(sample(&mut rng, grid, spec.n_negative).into_iter().map(|i| -((i + 1) as f64)));
    angles.sort_by(f64::total_cmp);
    let mut poses = Vec::with_capacity(spec.total());
    if spec.include_frontal {
        poses.push(RollPose::FRONTAL);
    }
    for a in angles {
        poses.push(RollPose::new(a)?);
    }
    Ok(poses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweep_has_nine_poses() {
        let p = plan_sweep(&SweepSpec::default(), 7).unwrap();
        assert_eq!(p.len(), 9);
        assert_eq!(p[0].degrees(), 0.0);
        assert_eq!(p.iter().filter(|a| a.degrees() > 0.0).count(), 4);
        assert_eq!(p.iter().filter(|a| a.degrees() < 0.0).count(), 4);
        assert_eq!(p, plan_sweep(&SweepSpec::default(), 7).unwrap());
    }

    #[test]
    fn too_many_angles() {
        let spec = SweepSpec {
            n_positive: 11,
            max_angle: 10.5,
            ..Default::default()
        };
        assert!(plan_sweep(&spec, 0).is_err());
        assert!(plan_sweep(&SweepSpec { max_angle: 61.0, ..Default::default() }, 0).is_err());
    }
}
