//! Identity anchor from a synthetic ridge blob: foreground mask, Sauvola
//! threshold, opening.
//!
//! `cargo run --example binarize_anchor [out_dir]`

use std::error::Error;
use std::path::PathBuf;

use fpforge::imagecore::foreground_ratio;
use fpforge::imagecore::pgm::{write_binary, write_gray};
use fpforge::sauvola::{binarize, estimate_foreground, SauvolaParams, DEFAULT_FG_BLOCK, DEFAULT_FG_STD};
use fpforge::synth::ridge_blob;

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&out)?;

    let img = ridge_blob(512, 512, 9.0, 200.0, 230.0);
    let mask = estimate_foreground(&img, DEFAULT_FG_BLOCK, DEFAULT_FG_STD)?;
    let params = SauvolaParams::default();
    let anchor = binarize(&img, &mask, &params)?;

    let ridge = anchor.foreground_count() as f64 / mask.count().max(1) as f64;
    println!("sauvola: w={} k={} R={}", params.window, params.k, params.range);
    println!("foreground ratio {:.3}", foreground_ratio(&mask));
    println!("ridge pixels {} ({:.1}% of the mask)", anchor.foreground_count(), 100.0 * ridge);

    write_gray(out.join("blob.pgm"), &img)?;
    write_binary(out.join("blob_anchor.pgm"), &anchor)?;
    println!("wrote {}", out.join("blob_anchor.pgm").display());
    Ok(())
}
