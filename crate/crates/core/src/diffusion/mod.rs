//! Latent diffusion arithmetic: noise schedules, the forward process, the
//! deterministic DDIM reverse step and codebook quantisation.
//!
//! No network lives here. Noise prediction goes through [`NoisePredictor`],
//! which the analytic oracle and constant predictor implement.

mod ddim;
mod latent;
mod schedule;
mod vq;

pub use ddim::{
    ddim_sample, ddim_step, ddim_step_to, denoising_loss, forward_noise, predict_z0, strided_timesteps,
    AnalyticPredictor, ConstantPredictor, NoisePredictor,
};
pub use latent::LatentGrid;
pub use schedule::{linear_schedule, NoiseSchedule, DEFAULT_BETA_END, DEFAULT_BETA_START, DEFAULT_STEPS};
pub use vq::{vq_quantize, Codebook, Quantized, DEFAULT_CODEBOOK_SIZE, LATENT_CHANNELS};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiffusionError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    Shape {
        expected: (usize, usize, usize),
        got: (usize, usize, usize),
    },
    #[error("timestep {t} outside 1..={max}")]
    Timestep { t: usize, max: usize },
    #[error("alpha_bar is zero at step {0}")]
    Singular(usize),
    #[error("codebook entries {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("codebook dimension {codebook} does not match {channels} latent channels")]
    Dimension { codebook: usize, channels: usize },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
}
