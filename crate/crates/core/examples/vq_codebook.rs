//! Quantize a random latent against a codebook and show index usage.
//!
//! `cargo run --example vq_codebook [codebook_size]`

use std::error::Error;

use fpforge::diffusion::{vq_quantize, Codebook, LatentGrid, LATENT_CHANNELS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn Error>> {
    let size: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(64);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cb = Codebook::random(size, LATENT_CHANNELS, &mut rng)?;
    let z = LatentGrid::standard_normal(LATENT_CHANNELS, 32, 32, &mut rng)?;

    let q = vq_quantize(&z, &cb)?;
    let again = vq_quantize(&q.grid, &cb)?;
    let mut used = vec![0usize; cb.len()];
    for &i in &q.indices {
        used[i] += 1;
    }
    let distinct = used.iter().filter(|&&n| n > 0).count();
    let busiest = used.iter().enumerate().max_by_key(|&(_, n)| *n).map(|(i, n)| (i, *n)).unwrap_or((0, 0));

    println!("codebook {} x {}", cb.len(), cb.dim());
    println!("{} vectors use {distinct} distinct entries; entry {} used {} times", q.indices.len(), busiest.0, busiest.1);
    println!("mean squared quantization error {:.4}", z.mean_squared_diff(&q.grid)?);
    println!("re-quantizing is a fixed point: {}", again.indices == q.indices);
    Ok(())
}
