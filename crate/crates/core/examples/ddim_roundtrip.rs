//! Noise a latent to t = T and walk it back with DDIM using the exact noise
//! predictor, for several step counts.
//!
//! `cargo run --example ddim_roundtrip [seed]`

use std::error::Error;

use fpforge::diffusion::{
    ddim_sample, forward_noise, strided_timesteps, AnalyticPredictor, LatentGrid, NoiseSchedule, DEFAULT_STEPS,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let schedule = NoiseSchedule::default();

    let z0 = LatentGrid::standard_normal(3, 16, 16, &mut rng)?;
    let eps = LatentGrid::standard_normal(3, 16, 16, &mut rng)?;
    let zt = forward_noise(&z0, DEFAULT_STEPS, &eps, &schedule)?;
    println!("alpha_bar(T) = {:.3e}", schedule.alpha_bar(DEFAULT_STEPS));

    let oracle = AnalyticPredictor { z0: &z0, schedule: &schedule };
    for steps in [1, 10, 50, 250, 1000] {
        let ts = strided_timesteps(DEFAULT_STEPS, steps)?;
        let back = ddim_sample(&zt, &ts, &oracle, None, &schedule)?;
        println!("{steps:>5} steps: max |z0 - recovered| = {:.2e}", back.max_abs_diff(&z0)?);
    }
    Ok(())
}
